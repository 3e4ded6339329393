#pragma once

#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coarset/atmen.hpp"
#include "coarset/morita.hpp"
#include "coarset/spectral.hpp"

// JSON readers and writers for every on-disk format, plus the number
// canonicalisation that keeps reports byte-stable.  Parsing throws
// std::invalid_argument with a message naming the offending field.

namespace coarset::io {

inline constexpr const char* kToolName = "coarset";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

/// The double obtained by printing v with 15 significant digits and reading
/// it back.  Every floating value in a report passes through this, so the
/// serialised text is independent of how the value was computed.
double canonical_float(double v);
std::string format_float(double v);  // the %.15g text itself

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// --- spaces -----------------------------------------------------------------
// {"components": [{"size": n, "edges": [[i, j], ...]}, ...]}
CoarseSpace parse_space(const std::string& json_text);
std::string space_json(const CoarseSpace& X);

// --- controlled sets --------------------------------------------------------
// {"pairs": [[x, y], ...]} over the points of X, validated against components.
ControlledSet parse_controlled_set(const std::string& json_text, const CoarseSpace& X);
std::string controlled_set_json(const ControlledSet& E);

// --- operators --------------------------------------------------------------
// {"triplets": [[row, col, re, im], ...]}
TranslationOp parse_operator(const std::string& json_text, const CoarseSpace& X);
std::string operator_json(const TranslationOp& T);

// --- partial translations ---------------------------------------------------
// {"map": [[x, t(x)], ...]}
PartialTranslation parse_translation(const std::string& json_text, int universe);
std::string translation_json(const PartialTranslation& t);

// --- kernels ----------------------------------------------------------------
// {"kind": "distance"}
// {"kind": "truncated"}                       distance capped at girth/3
// {"kind": "embedding", "dim": d, "seed": s}
// {"kind": "explicit", "blocks": [[...], ...]} row-major per component
Kernel parse_kernel(const std::string& json_text, const CoarseSpace& X);

// --- partitions -------------------------------------------------------------
// {"markers": [y, ...], "radius": r}   nearest-marker blocks, or
// {"blocks": {"<marker>": [x, ...], ...}}   explicit blocks
struct PartitionSpec {
  bool from_markers = false;
  std::vector<int> markers;
  int radius = 0;
  std::vector<std::pair<int, std::vector<int>>> blocks;
};

PartitionSpec parse_partition(const std::string& json_text);
DensePartition make_partition(const CoarseSpace& X, const PartitionSpec& spec);

// --- report payloads --------------------------------------------------------

/// {"components": [{"component", "size", "eigenvalues", "complete",
///   "lambda_max", "gap", "kernel_dim"}, ...], "min_gap", "sigma_max_available": false}
std::string spectral_report_json(const SpectralReport& report);

std::string expander_verdict_json(const ExpanderVerdict& verdict);

/// {"rows": [{"name", "deviation", "tolerance", "pass"}, ...], "all_pass", ...}
std::string identity_report_json(const IdentityReport& report);

/// '#'-prefixed header lines, then "component,t,value" rows.
std::string witness_csv(const std::vector<std::string>& header_lines,
                        const std::vector<std::tuple<int, double, double>>& rows);

}  // namespace coarset::io
