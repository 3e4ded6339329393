#include "coarset/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coarset::io {

using ordered_json = nlohmann::ordered_json;

double canonical_float(double v) { return std::strtod(format_float(v).c_str(), nullptr); }

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

ordered_json parse_text(const std::string& text) {
  try {
    return ordered_json::parse(text);  // parse_error message carries the position
  } catch (const ordered_json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
}

const ordered_json& field(const ordered_json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw std::invalid_argument(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

int int_field(const ordered_json& j, const char* name) {
  const auto& f = field(j, name);
  if (!f.is_number_integer())
    throw std::invalid_argument(std::string("field \"") + name + "\" must be an integer");
  return f.get<int>();
}

std::vector<std::pair<int, int>> pair_list(const ordered_json& arr, const char* what) {
  if (!arr.is_array())
    throw std::invalid_argument(std::string(what) + " must be an array of [a, b] pairs");
  std::vector<std::pair<int, int>> out;
  out.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw std::invalid_argument(std::string(what) + " entries must be integer pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

}  // namespace

CoarseSpace parse_space(const std::string& json_text) {
  const auto j = parse_text(json_text);
  const auto& comps = field(j, "components");
  if (!comps.is_array() || comps.empty())
    throw std::invalid_argument("\"components\" must be a non-empty array");
  std::vector<ComponentSpec> specs;
  specs.reserve(comps.size());
  for (const auto& c : comps) {
    ComponentSpec spec;
    spec.size = int_field(c, "size");
    if (spec.size <= 0) throw std::invalid_argument("component size must be positive");
    spec.edges = pair_list(field(c, "edges"), "\"edges\"");
    for (const auto& [a, b] : spec.edges)
      if (a < 0 || b < 0 || a >= spec.size || b >= spec.size || a == b)
        throw std::invalid_argument("edge endpoints must be distinct local ids in range");
    specs.push_back(std::move(spec));
  }
  return CoarseSpace(std::move(specs));
}

std::string space_json(const CoarseSpace& X) {
  ordered_json comps = ordered_json::array();
  for (int c = 0; c < X.num_components(); ++c) {
    ordered_json edges = ordered_json::array();
    for (const auto& [i, j] : X.component_edges(c)) edges.push_back({i, j});
    comps.push_back({{"size", X.component_size(c)}, {"edges", std::move(edges)}});
  }
  return ordered_json{{"components", std::move(comps)}}.dump(2) + "\n";
}

ControlledSet parse_controlled_set(const std::string& json_text, const CoarseSpace& X) {
  const auto j = parse_text(json_text);
  const auto pairs = pair_list(field(j, "pairs"), "\"pairs\"");
  for (const auto& [x, y] : pairs)
    if (x < 0 || y < 0 || x >= X.num_points() || y >= X.num_points())
      throw std::invalid_argument("pair out of range of the space");
  ControlledSet E(X.num_points(), pairs);
  if (!X.pairs_within_components(E))
    throw std::invalid_argument("pairs must stay within components");
  return E;
}

std::string controlled_set_json(const ControlledSet& E) {
  ordered_json pairs = ordered_json::array();
  for (const auto& [x, y] : E.pairs()) pairs.push_back({x, y});
  return ordered_json{{"pairs", std::move(pairs)}}.dump(2) + "\n";
}

TranslationOp parse_operator(const std::string& json_text, const CoarseSpace& X) {
  const auto j = parse_text(json_text);
  const auto& arr = field(j, "triplets");
  if (!arr.is_array()) throw std::invalid_argument("\"triplets\" must be an array");
  std::vector<SparseMatrix<cplx>::Triplet> trips;
  trips.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        !e[2].is_number() || !e[3].is_number())
      throw std::invalid_argument("\"triplets\" entries must be [row, col, re, im]");
    trips.push_back({e[0].get<int>(), e[1].get<int>(), {e[2].get<double>(), e[3].get<double>()}});
  }
  return TranslationOp(X, SparseMatrix<cplx>(X.num_points(), X.num_points(), std::move(trips)));
}

std::string operator_json(const TranslationOp& T) {
  ordered_json trips = ordered_json::array();
  for (const auto& t : T.matrix().entries())
    trips.push_back({t.row, t.col, canonical_float(t.value.real()), canonical_float(t.value.imag())});
  return ordered_json{{"triplets", std::move(trips)}}.dump(2) + "\n";
}

PartialTranslation parse_translation(const std::string& json_text, int universe) {
  const auto j = parse_text(json_text);
  auto entries = pair_list(field(j, "map"), "\"map\"");
  for (const auto& [x, tx] : entries)
    if (x < 0 || tx < 0 || x >= universe || tx >= universe)
      throw std::invalid_argument("\"map\" entry out of range");
  return PartialTranslation(universe, std::move(entries));
}

std::string translation_json(const PartialTranslation& t) {
  ordered_json map = ordered_json::array();
  for (const auto& [x, tx] : t.mapping()) map.push_back({x, tx});
  return ordered_json{{"map", std::move(map)}}.dump(2) + "\n";
}

Kernel parse_kernel(const std::string& json_text, const CoarseSpace& X) {
  const auto j = parse_text(json_text);
  const auto& kindf = field(j, "kind");
  if (!kindf.is_string()) throw std::invalid_argument("\"kind\" must be a string");
  const std::string kind = kindf.get<std::string>();
  if (kind == "distance") return distance_kernel(X);
  if (kind == "truncated") return truncated_distance_kernel(X);
  if (kind == "embedding") {
    const int dim = int_field(j, "dim");
    const auto& seed = field(j, "seed");
    if (!seed.is_number_integer() || seed.get<long long>() < 0)
      throw std::invalid_argument("\"seed\" must be a non-negative integer");
    return embedding_kernel(X, dim, seed.get<unsigned long long>());
  }
  if (kind == "explicit") {
    const auto& arr = field(j, "blocks");
    if (!arr.is_array()) throw std::invalid_argument("\"blocks\" must be an array");
    std::vector<std::vector<double>> blocks;
    blocks.reserve(arr.size());
    for (const auto& b : arr) {
      if (!b.is_array()) throw std::invalid_argument("\"blocks\" entries must be arrays");
      std::vector<double> block;
      block.reserve(b.size());
      for (const auto& v : b) {
        if (!v.is_number()) throw std::invalid_argument("kernel entries must be numbers");
        block.push_back(v.get<double>());
      }
      blocks.push_back(std::move(block));
    }
    return explicit_kernel(X, std::move(blocks));
  }
  throw std::invalid_argument("unknown kernel kind \"" + kind +
                              "\" (expected distance, truncated, embedding, or explicit)");
}

PartitionSpec parse_partition(const std::string& json_text) {
  const auto j = parse_text(json_text);
  PartitionSpec spec;
  if (j.contains("markers")) {
    spec.from_markers = true;
    const auto& arr = field(j, "markers");
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument("\"markers\" must be a non-empty array");
    for (const auto& m : arr) {
      if (!m.is_number_integer()) throw std::invalid_argument("markers must be integers");
      spec.markers.push_back(m.get<int>());
    }
    spec.radius = int_field(j, "radius");
    if (spec.radius < 0) throw std::invalid_argument("\"radius\" must be non-negative");
    return spec;
  }
  if (j.contains("blocks")) {
    const auto& obj = field(j, "blocks");
    if (!obj.is_object() || obj.empty())
      throw std::invalid_argument("\"blocks\" must be a non-empty object keyed by marker id");
    for (const auto& [key, members] : obj.items()) {
      int marker = 0;
      try {
        std::size_t used = 0;
        marker = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw std::invalid_argument("block key \"" + key + "\" is not an integer marker id");
      }
      if (!members.is_array()) throw std::invalid_argument("block members must be an array");
      std::vector<int> ids;
      for (const auto& m : members) {
        if (!m.is_number_integer()) throw std::invalid_argument("block members must be integers");
        ids.push_back(m.get<int>());
      }
      spec.blocks.emplace_back(marker, std::move(ids));
    }
    return spec;
  }
  throw std::invalid_argument("partition needs either \"markers\"+\"radius\" or \"blocks\"");
}

DensePartition make_partition(const CoarseSpace& X, const PartitionSpec& spec) {
  if (spec.from_markers) return build_partition(X, spec.markers, spec.radius);
  return partition_from_blocks(X, spec.blocks);
}

std::string spectral_report_json(const SpectralReport& report) {
  ordered_json comps = ordered_json::array();
  for (const auto& c : report.components) {
    ordered_json eigs = ordered_json::array();
    for (double v : c.eigenvalues) eigs.push_back(canonical_float(v));
    comps.push_back({{"component", c.component},
                     {"size", c.size},
                     {"eigenvalues", std::move(eigs)},
                     {"complete", c.complete},
                     {"lambda_max", canonical_float(c.lambda_max)},
                     {"gap", canonical_float(c.gap)},
                     {"kernel_dim", c.kernel_dim}});
  }
  ordered_json j{{"components", std::move(comps)},
                 {"min_gap", canonical_float(report.min_gap)},
                 {"sigma_max_available", false}};
  return j.dump(2) + "\n";
}

std::string expander_verdict_json(const ExpanderVerdict& v) {
  ordered_json gaps = ordered_json::array();
  for (double g : v.gaps) gaps.push_back(canonical_float(g));
  ordered_json j{{"sizes", v.sizes},
                 {"max_degrees", v.max_degrees},
                 {"gaps", std::move(gaps)},
                 {"sizes_increasing", v.sizes_increasing},
                 {"degrees_bounded", v.degrees_bounded},
                 {"max_degree", v.max_degree},
                 {"min_gap", canonical_float(v.min_gap)},
                 {"gap_at_least_c", v.gap_at_least_c},
                 {"expander_evidence", v.expander_evidence},
                 {"failing", v.failing}};
  return j.dump(2) + "\n";
}

std::string identity_report_json(const IdentityReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"name", r.name},
                    {"deviation", canonical_float(r.deviation)},
                    {"tolerance", canonical_float(r.tolerance)},
                    {"pass", r.pass}});
  ordered_json j{{"rows", std::move(rows)},
                 {"all_pass", report.all_pass},
                 {"weight_norm", canonical_float(report.weight_norm)},
                 {"weight_inv_norm", canonical_float(report.weight_inv_norm)}};
  return j.dump(2) + "\n";
}

std::string witness_csv(const std::vector<std::string>& header_lines,
                        const std::vector<std::tuple<int, double, double>>& rows) {
  std::string out;
  for (const auto& line : header_lines) out += "# " + line + "\n";
  out += "component,t,value\n";
  for (const auto& [component, t, value] : rows)
    out += std::to_string(component) + "," + format_float(t) + "," + format_float(value) + "\n";
  return out;
}

}  // namespace coarset::io
