// Command-line front end: reads space/set/kernel/partition files, runs the
// analyses, and writes deterministic schema-versioned JSON (CSV for witness
// sweeps).  Exit 0: analysis completed, verdicts live in the report.
// Exit 2: bad input or config.  Exit 3: internal invariant violation.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coarset/atmen.hpp"
#include "coarset/boxspace.hpp"
#include "coarset/decomp.hpp"
#include "coarset/io.hpp"
#include "coarset/morita.hpp"
#include "coarset/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using coarset::io::canonical_float;
using ordered_json = nlohmann::ordered_json;

struct Common {
  std::string out;
  double tol_eig = 1e-8;
  double tol_id = 1e-10;
  unsigned long long seed = 1;
  int jobs = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "write the report here instead of stdout")
      ->envname("COARSET_OUT");
  sub->add_option("--tol-eig", c.tol_eig, "zero-eigenvalue tolerance")
      ->envname("COARSET_TOL_EIG")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--tol-id", c.tol_id, "identity-check tolerance")
      ->envname("COARSET_TOL_ID")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "seed for all randomised steps")
      ->envname("COARSET_SEED")
      ->capture_default_str();
  sub->add_option("--jobs", c.jobs, "worker threads (0 = library default)")
      ->envname("COARSET_JOBS")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

std::string load(const std::string& path) {
  try {
    return coarset::io::read_file(path);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
}

ordered_json envelope(const std::string& command, ordered_json config, ordered_json results) {
  ordered_json j;
  j["schema_version"] = coarset::io::kSchemaVersion;
  j["tool"] = ordered_json{{"name", coarset::io::kToolName},
                           {"version", coarset::io::kToolVersion}};
  j["command"] = command;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  return j;
}

ordered_json base_config(const Common& c) {
  ordered_json cfg;
  cfg["tol_eig"] = canonical_float(c.tol_eig);
  cfg["tol_id"] = canonical_float(c.tol_id);
  cfg["seed"] = c.seed;
  cfg["jobs"] = c.jobs;
  return cfg;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    coarset::io::write_file(c.out, text);
}

void emit_json(const Common& c, const ordered_json& j) { emit(c, j.dump(2) + "\n"); }

ordered_json translation_block(const coarset::PartialTranslation& t) {
  ordered_json map = ordered_json::array();
  for (const auto& [x, tx] : t.mapping()) map.push_back({x, tx});
  return ordered_json{{"map", std::move(map)}};
}

std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--t entry \"" + token + "\" is not a number");
    }
    if (used != token.size() || !(v > 0.0))
      throw std::invalid_argument("--t entries must be positive numbers");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--t must list at least one value");
  return out;
}

std::vector<long long> parse_int_list(const std::string& text, const char* flag) {
  std::vector<long long> out;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(flag) + " entry \"" + token + "\" is not an integer");
    }
    if (used != token.size())
      throw std::invalid_argument(std::string(flag) + " entry \"" + token + "\" is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(std::string(flag) + " must list at least one value");
  return out;
}

// --- subcommand bodies ------------------------------------------------------

int run_spectrum(const Common& c, const std::string& input, const std::string& set_path) {
  const auto X = coarset::io::parse_space(load(input));
  const coarset::ControlledSet E =
      set_path.empty() ? X.gen() : coarset::io::parse_controlled_set(load(set_path), X);
  const auto L = coarset::laplacian(X, E);
  const auto report = coarset::spectrum(L, 4096, c.seed);

  ordered_json results = ordered_json::parse(coarset::io::spectral_report_json(report));
  // Constants-kernel verification needs dense eigenvectors; run it only when
  // every component is small enough for that to be cheap.
  int max_size = 0;
  for (int i = 0; i < X.num_components(); ++i)
    max_size = std::max(max_size, X.component_size(i));
  if (max_size <= 2048) {
    try {
      const auto kc = coarset::kernel_is_constants(X, E, c.tol_eig);
      results["kernel_check"] =
          ordered_json{{"ok", kc.ok},
                       {"kernel_dim", kc.kernel_dim},
                       {"expected", kc.expected},
                       {"max_deviation", canonical_float(kc.max_deviation)}};
    } catch (const std::domain_error& e) {
      results["kernel_check"] = ordered_json{{"ok", false}, {"refused", e.what()}};
    }
  }

  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["set"] = set_path.empty() ? ordered_json(nullptr) : ordered_json(set_path);
  emit_json(c, envelope("spectrum", std::move(cfg), std::move(results)));
  return 0;
}

int run_expander(const Common& c, const std::string& input, double bound) {
  const auto X = coarset::io::parse_space(load(input));
  // The components of the input space, in order, are the members of the
  // sequence under test.
  std::vector<coarset::CoarseSpace> sequence;
  sequence.reserve(X.num_components());
  for (int i = 0; i < X.num_components(); ++i)
    sequence.push_back(coarset::CoarseSpace(
        {coarset::ComponentSpec{X.component_size(i), X.component_edges(i)}}));
  const auto verdict = coarset::expander_verdict(sequence, bound, 4096, c.seed);

  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["c"] = canonical_float(bound);
  emit_json(c, envelope("expander", std::move(cfg),
                        ordered_json::parse(coarset::io::expander_verdict_json(verdict))));
  return 0;
}

int run_decompose(const Common& c, const std::string& input, const std::string& set_path,
                  const std::string& base_path, const std::string& translation_path) {
  const auto X = coarset::io::parse_space(load(input));
  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  ordered_json results;

  if (!translation_path.empty()) {
    if (!set_path.empty() || !base_path.empty())
      throw std::invalid_argument("--translation cannot be combined with --set/--base");
    const auto t = coarset::io::parse_translation(load(translation_path), X.num_points());
    const auto parts = coarset::tripartition(t);
    const auto pieces = coarset::split_antisymmetric(t);
    cfg["translation"] = translation_path;
    ordered_json jparts = ordered_json::array();
    for (const auto& part : parts.parts) jparts.push_back(part);
    ordered_json jpieces = ordered_json::array();
    for (const auto& piece : pieces) jpieces.push_back(translation_block(piece));
    results["parts"] = std::move(jparts);
    results["antisymmetric_pieces"] = std::move(jpieces);
    results["reassembles"] = coarset::merge(pieces) == t;
  } else {
    if (set_path.empty())
      throw std::invalid_argument("decompose needs --set (controlled set) or --translation");
    const auto F = coarset::io::parse_controlled_set(load(set_path), X);
    const coarset::ControlledSet E = base_path.empty()
                                         ? coarset::ControlledSet(X.num_points(), {})
                                         : coarset::io::parse_controlled_set(load(base_path), X);
    const auto dec = coarset::elementary_decomposition(F, E);
    cfg["set"] = set_path;
    cfg["base"] = base_path.empty() ? ordered_json(nullptr) : ordered_json(base_path);
    ordered_json jpieces = ordered_json::array();
    for (const auto& piece : dec.pieces) jpieces.push_back(translation_block(piece));
    results["base_pairs"] = static_cast<int>(dec.base.size());
    results["diagonal_pairs"] = static_cast<int>(dec.diagonal.size());
    results["pieces"] = std::move(jpieces);
    results["reassembles"] = dec.reassemble() == F;
  }
  emit_json(c, envelope("decompose", std::move(cfg), std::move(results)));
  return 0;
}

int run_factor(const Common& c, const std::string& input, const std::string& translation_path,
               const std::string& set_path, int power) {
  const auto X = coarset::io::parse_space(load(input));
  const auto t = coarset::io::parse_translation(load(translation_path), X.num_points());
  const auto E = coarset::io::parse_controlled_set(load(set_path), X);
  const auto fac = coarset::factor_through(t, E, power);

  ordered_json blocks = ordered_json::array();
  for (const auto& block : fac.blocks) {
    ordered_json chain = ordered_json::array();
    for (const auto& step : block.chain) chain.push_back(translation_block(step));
    blocks.push_back(ordered_json{{"points", block.points}, {"chain", std::move(chain)}});
  }
  ordered_json results;
  results["power"] = fac.power;
  results["blocks"] = std::move(blocks);
  results["reassembles"] = fac.reassemble() == t;

  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["translation"] = translation_path;
  cfg["set"] = set_path;
  cfg["power"] = power;
  emit_json(c, envelope("factor", std::move(cfg), std::move(results)));
  return 0;
}

int run_morita(const Common& c, const std::string& input, const std::string& partition_path,
               int trials) {
  const auto X = coarset::io::parse_space(load(input));
  const auto spec = coarset::io::parse_partition(load(partition_path));
  const auto P = coarset::io::make_partition(X, spec);
  const auto report = coarset::identity_suite(P, c.seed, trials);

  ordered_json results = ordered_json::parse(coarset::io::identity_report_json(report));
  results["blocks"] = P.num_blocks();
  results["max_block_size"] = P.max_block_size();

  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["partition"] = partition_path;
  cfg["trials"] = trials;
  emit_json(c, envelope("morita-suite", std::move(cfg), std::move(results)));
  return 0;
}

int run_boxspace(const Common& c, const std::string& family, const std::string& params,
                 double bound) {
  const auto values = parse_int_list(params, "--params");
  coarset::BoxSpace box = [&] {
    if (family == "cyclic") return coarset::box_space_cyclic(values);
    if (family == "sl2") return coarset::box_space_sl2(values);
    throw std::invalid_argument("--family must be cyclic or sl2");
  }();

  // Exact agreement between the group-theoretic Laplacian image and the
  // Cayley-graph Laplacian, quotient by quotient.
  bool laplacian_match = true;
  ordered_json quotients = ordered_json::array();
  for (const auto& q : box.quotients) {
    const auto Xq = coarset::cayley_space(q);
    const auto Lq = coarset::laplacian(Xq, Xq.gen());
    const bool match = coarset::group_laplacian_image(q) == Lq.matrix;
    laplacian_match = laplacian_match && match;
    quotients.push_back(ordered_json{{"label", q.label},
                                     {"size", q.size},
                                     {"generators", static_cast<int>(q.generators.size())},
                                     {"laplacian_match", match}});
  }

  std::vector<coarset::CoarseSpace> sequence;
  for (const auto& q : box.quotients) sequence.push_back(coarset::cayley_space(q));
  const auto verdict = coarset::expander_verdict(sequence, bound, 4096, c.seed);
  const auto L = coarset::laplacian(box.space, box.space.gen());
  const auto report = coarset::spectrum(L, 4096, c.seed);

  ordered_json results;
  results["family"] = family;
  results["quotients"] = std::move(quotients);
  results["laplacian_match"] = laplacian_match;
  results["spectrum"] = ordered_json::parse(coarset::io::spectral_report_json(report));
  results["verdict"] = ordered_json::parse(coarset::io::expander_verdict_json(verdict));

  ordered_json cfg = base_config(c);
  cfg["family"] = family;
  cfg["params"] = params;
  cfg["c"] = canonical_float(bound);
  emit_json(c, envelope("boxspace", std::move(cfg), std::move(results)));
  return 0;
}

int run_girth(const Common& c, const std::string& input) {
  const auto X = coarset::io::parse_space(load(input));
  ordered_json comps = ordered_json::array();
  const auto all = coarset::girths(X);
  for (int i = 0; i < X.num_components(); ++i)
    comps.push_back(ordered_json{{"component", i},
                                 {"size", X.component_size(i)},
                                 {"girth", all[i] ? ordered_json(*all[i]) : ordered_json(nullptr)}});
  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  emit_json(c, envelope("girth", std::move(cfg), ordered_json{{"components", std::move(comps)}}));
  return 0;
}

int run_match_annulus(const Common& c, const std::string& input, int r, int component) {
  const auto X = coarset::io::parse_space(load(input));
  if (component >= X.num_components())
    throw std::invalid_argument("--component out of range");
  ordered_json comps = ordered_json::array();
  for (int i = 0; i < X.num_components(); ++i) {
    if (component >= 0 && i != component) continue;
    ordered_json entry;
    entry["component"] = i;
    try {
      const auto m = coarset::annulus_matching(X, i, r);
      entry["found"] = true;
      entry["r"] = m.r;
      entry["s"] = m.s;
      entry["s_start"] = m.s_start;
      entry["sigma"] = m.sigma;
    } catch (const std::runtime_error& e) {
      entry["found"] = false;
      entry["error"] = e.what();
    }
    comps.push_back(std::move(entry));
  }
  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["r"] = r;
  cfg["component"] = component;
  emit_json(c, envelope("match-annulus", std::move(cfg),
                        ordered_json{{"components", std::move(comps)}}));
  return 0;
}

int run_witness(const Common& c, const std::string& input, const std::string& kernel_path,
                const std::string& t_list, int component) {
  const auto X = coarset::io::parse_space(load(input));
  if (component >= X.num_components())
    throw std::invalid_argument("--component out of range");
  const coarset::Kernel k = kernel_path.empty()
                                ? coarset::truncated_distance_kernel(X)
                                : coarset::io::parse_kernel(load(kernel_path), X);
  const auto ts = parse_t_list(t_list);

  std::vector<std::tuple<int, double, double>> rows;
  for (int i = 0; i < X.num_components(); ++i) {
    if (component >= 0 && i != component) continue;
    for (double t : ts)
      rows.emplace_back(i, canonical_float(t),
                        canonical_float(coarset::witness_expectation(X, i, k, t)));
  }
  const std::vector<std::string> header = {
      std::string(coarset::io::kToolName) + " " + coarset::io::kToolVersion + " schema " +
          coarset::io::kSchemaVersion,
      "command: witness",
      "input: " + input,
      "kernel: " + (kernel_path.empty() ? std::string("truncated (default)") : kernel_path),
      "t: " + t_list,
      "component: " + std::to_string(component),
      "tol_eig: " + coarset::io::format_float(c.tol_eig) +
          "  tol_id: " + coarset::io::format_float(c.tol_id) +
          "  seed: " + std::to_string(c.seed) + "  jobs: " + std::to_string(c.jobs),
  };
  emit(c, coarset::io::witness_csv(header, rows));
  return 0;
}

int run_cheeger(const Common& c, const std::string& input, int component) {
  const auto X = coarset::io::parse_space(load(input));
  if (component >= X.num_components())
    throw std::invalid_argument("--component out of range");
  ordered_json comps = ordered_json::array();
  for (int i = 0; i < X.num_components(); ++i) {
    if (component >= 0 && i != component) continue;
    const auto est = coarset::cheeger(X, i, 4096, c.seed);
    comps.push_back(ordered_json{{"component", i},
                                 {"value", canonical_float(est.value)},
                                 {"exact", est.exact},
                                 {"subset", est.subset}});
  }
  ordered_json cfg = base_config(c);
  cfg["input"] = input;
  cfg["component"] = component;
  emit_json(c, envelope("cheeger", std::move(cfg),
                        ordered_json{{"components", std::move(comps)}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive calculus for coarse spaces: controlled sets, partial "
               "translations, translation-algebra Laplacians, and their spectral reports"};
  app.require_subcommand(1);

  Common common;
  std::string input, set_path, base_path, translation_path, partition_path, kernel_path;
  std::string family, params, t_list = "0.1,1,10";
  double bound = 0.05;
  int power = 1, trials = 25, r = 1, component = -1;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and gaps of a Laplacian");
  spectrum->add_option("--input", input, "space file")->required();
  spectrum->add_option("--set", set_path, "controlled set file (default: generating set)");
  add_common(spectrum, common);

  auto* expander = app.add_subcommand("expander", "expansion verdict for a component sequence");
  expander->add_option("--input", input, "space file; components form the sequence")->required();
  expander->add_option("--c", bound, "required spectral gap")->capture_default_str();
  add_common(expander, common);

  auto* decompose =
      app.add_subcommand("decompose", "tripartition a translation or split a controlled set");
  decompose->add_option("--input", input, "space file")->required();
  decompose->add_option("--set", set_path, "controlled set to decompose");
  decompose->add_option("--base", base_path, "base controlled set left intact");
  decompose->add_option("--translation", translation_path, "partial translation to tripartition");
  add_common(decompose, common);

  auto* factor = app.add_subcommand("factor", "write a translation as chains through a set");
  factor->add_option("--input", input, "space file")->required();
  factor->add_option("--translation", translation_path, "partial translation file")->required();
  factor->add_option("--set", set_path, "controlled set file")->required();
  factor->add_option("--power", power, "chain length n")->required()->check(CLI::PositiveNumber);
  add_common(factor, common);

  auto* morita = app.add_subcommand("morita-suite", "averaging/compression identity checks");
  morita->add_option("--input", input, "space file")->required();
  morita->add_option("--partition", partition_path, "partition file")->required();
  morita->add_option("--trials", trials, "random trials per identity")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(morita, common);

  auto* boxspace = app.add_subcommand("boxspace", "generate a quotient family and analyse it");
  boxspace->add_option("--family", family, "cyclic or sl2")->required();
  boxspace->add_option("--params", params, "comma-separated orders (cyclic) or primes (sl2)")
      ->required();
  boxspace->add_option("--c", bound, "required spectral gap")->capture_default_str();
  add_common(boxspace, common);

  auto* girth_cmd = app.add_subcommand("girth", "shortest cycle per component");
  girth_cmd->add_option("--input", input, "space file")->required();
  add_common(girth_cmd, common);

  auto* annulus = app.add_subcommand("match-annulus", "permutation displacing into a band");
  annulus->add_option("--input", input, "space file")->required();
  annulus->add_option("--r", r, "displacement floor")->required()->check(CLI::NonNegativeNumber);
  annulus->add_option("--component", component, "restrict to one component (-1 = all)")
      ->capture_default_str();
  add_common(annulus, common);

  auto* witness = app.add_subcommand("witness", "kernel expectation sweep (CSV)");
  witness->add_option("--input", input, "space file")->required();
  witness->add_option("--kernel", kernel_path, "kernel file (default: truncated distance)");
  witness->add_option("--t", t_list, "comma-separated positive t values")->capture_default_str();
  witness->add_option("--component", component, "restrict to one component (-1 = all)")
      ->capture_default_str();
  add_common(witness, common);

  auto* cheeger_cmd = app.add_subcommand("cheeger", "edge expansion per component");
  cheeger_cmd->add_option("--input", input, "space file")->required();
  cheeger_cmd->add_option("--component", component, "restrict to one component (-1 = all)")
      ->capture_default_str();
  add_common(cheeger_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

#ifdef _OPENMP
  if (common.jobs > 0) omp_set_num_threads(common.jobs);
#endif

  try {
    if (spectrum->parsed()) return run_spectrum(common, input, set_path);
    if (expander->parsed()) return run_expander(common, input, bound);
    if (decompose->parsed())
      return run_decompose(common, input, set_path, base_path, translation_path);
    if (factor->parsed()) return run_factor(common, input, translation_path, set_path, power);
    if (morita->parsed()) return run_morita(common, input, partition_path, trials);
    if (boxspace->parsed()) return run_boxspace(common, family, params, bound);
    if (girth_cmd->parsed()) return run_girth(common, input);
    if (annulus->parsed()) return run_match_annulus(common, input, r, component);
    if (witness->parsed()) return run_witness(common, input, kernel_path, t_list, component);
    if (cheeger_cmd->parsed()) return run_cheeger(common, input, component);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
