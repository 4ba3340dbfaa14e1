#include "majent/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "majent/errors.hpp"
#include "majent/io.hpp"

namespace majent::cli {

namespace {

using io::Json;

constexpr double kUhlmannTol = 1e-7;
constexpr double kBirkhoffDefaultTol = 1e-12;

class UsageError : public FormatError {
 public:
  using FormatError::FormatError;
};

const std::string& input(const RunConfig& cfg, std::size_t i, const char* role) {
  if (cfg.inputs.size() <= i) {
    std::ostringstream os;
    os << cfg.command << ": missing --in for " << role << " (input #" << (i + 1) << ")";
    throw UsageError(os.str());
  }
  return cfg.inputs[i];
}

void require_inputs(const RunConfig& cfg, std::size_t n) {
  if (cfg.inputs.size() > n) {
    std::ostringstream os;
    os << cfg.command << ": expected " << n << " --in path(s), got " << cfg.inputs.size();
    throw UsageError(os.str());
  }
}

bool looks_like_vector(const Json& j) { return j.is_object() && j.contains("entries"); }

// ProbVector input, or the spectrum of a density-matrix input.
ProbVector load_distribution(const std::string& path) {
  const Json j = io::load_json(path);
  if (looks_like_vector(j)) return io::prob_vector_from_json(j, path);
  return spectrum(io::density_from_json(j, path));
}

Json base_report(Json tolerances) {
  Json report;
  report["version"] = kVersion;
  report["tolerances"] = std::move(tolerances);
  return report;
}

RunResult ok(const Json& report, int code = kExitOk) { return {code, io::dump(report), {}}; }

RunResult cmd_entropy(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const std::string& path = input(cfg, 0, "distribution or state");
  const Json j = io::load_json(path);
  Json report = base_report(Json{{"log_floor", 1e-300}});
  if (looks_like_vector(j)) {
    const ProbVector p = io::prob_vector_from_json(j, path);
    const double h = shannon_entropy(p);
    report["shannon_bits"] = h;
    report["verified"] = Json{{"nonnegative", h >= 0.0}};
  } else {
    const DensityMatrix rho = io::density_from_json(j, path);
    const ProbVector lam = spectrum(rho);
    const double s = shannon_entropy(lam);
    report["von_neumann_bits"] = s;
    report["spectrum"] = lam.values();
    const double cap = std::log2(static_cast<double>(rho.dimension()));
    report["verified"] = Json{{"within_bounds", s >= -1e-12 && s <= cap + 1e-9}, {"log2_d", cap}};
  }
  return ok(report);
}

RunResult cmd_majorize(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const double tol = cfg.tol.value_or(kDefaultMajorizationTol);
  const ProbVector a = load_distribution(input(cfg, 0, "a"));
  const ProbVector b = load_distribution(input(cfg, 1, "b"));
  const MajorizationVerdict v = is_majorized(a, b, tol);
  Json report = base_report(Json{{"majorization", tol}});
  report.update(io::to_json(v));
  report["verified"] = Json{{"holds_implies_no_violation", !v.holds || (!v.first_violation && v.sums_equal)}};
  return ok(report, (cfg.require && !v.holds) ? kExitDomain : kExitOk);
}

RunResult cmd_transfer(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const ProbVector a = load_distribution(input(cfg, 0, "a"));
  const ProbVector b = load_distribution(input(cfg, 1, "b"));
  const TransferChain chain = find_transfer_chain(a, b);
  const DoublyStochasticMatrix q = chain_to_doubly_stochastic(chain);
  const std::size_t n = chain.dimension;
  const ProbVector as = sort_desc(zero_pad(a, n));
  const ProbVector bs = sort_desc(zero_pad(b, n));
  const ProbVector image = q * bs;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(image[i] - as[i]));
  Json report = base_report(Json{{"majorization", kDefaultMajorizationTol}, {"reconstruction", 1e-9}});
  report["chain"] = io::to_json(chain);
  report["doubly_stochastic"] = io::real_matrix_to_json(q.matrix());
  report["verified"] = Json{{"max_abs_error", err}, {"within_tol", err <= 1e-9}, {"steps", chain.steps.size()},
                            {"step_bound", n - 1}};
  return ok(report);
}

RunResult cmd_birkhoff(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const std::string& path = input(cfg, 0, "doubly stochastic matrix");
  const double tol = cfg.tol.value_or(kBirkhoffDefaultTol);
  const Eigen::MatrixXd q = io::real_matrix_from_json(io::load_json(path), path);
  const BirkhoffDecomposition bd = birkhoff_decompose(q, tol);
  const double err = (bd.reconstruct() - q).cwiseAbs().maxCoeff();
  const std::size_t d = static_cast<std::size_t>(q.rows());
  const double bound = birkhoff_error_bound(d, tol);
  double weight_sum = 0.0;
  for (const auto& t : bd.terms) weight_sum += t.weight;
  Json report = base_report(Json{{"birkhoff", tol}, {"reconstruction", bound}});
  report.update(io::to_json(bd));
  report["verified"] = Json{{"reconstruction_error", err},
                            {"within_tol", err <= bound},
                            {"weight_sum", weight_sum},
                            {"term_count", bd.terms.size()},
                            {"term_bound", (d - 1) * (d - 1) + 1}};
  return ok(report);
}

RunResult cmd_schur_horn(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const ProbVector a = load_distribution(input(cfg, 0, "a"));
  const ProbVector b = load_distribution(input(cfg, 1, "b"));
  const OrthogonalMatrix u = schur_horn_orthogonal(a, b);
  const std::size_t n = u.dimension();
  const ProbVector as = sort_desc(zero_pad(a, n));
  const ProbVector bs = sort_desc(zero_pad(b, n));
  Eigen::VectorXd bv(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) bv(static_cast<Eigen::Index>(i)) = bs[i];
  const Eigen::VectorXd diag = (u.matrix() * bv.asDiagonal() * u.matrix().transpose()).diagonal();
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(diag(static_cast<Eigen::Index>(i)) - as[i]));
  Json report = base_report(Json{{"majorization", kDefaultMajorizationTol}, {"diagonal", 1e-9}, {"orthogonality", kOrthogonalTol}});
  report["orthogonal"] = io::real_matrix_to_json(u.matrix());
  report["verified"] = Json{{"diagonal_error", err}, {"within_tol", err <= 1e-9}};
  return ok(report);
}

std::pair<DensityMatrix, DensityMatrix> load_state_pair(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const std::string& p1 = input(cfg, 0, "rho1 (target)");
  const std::string& p2 = input(cfg, 1, "rho2 (source)");
  return {io::density_from_json(io::load_json(p1), p1), io::density_from_json(io::load_json(p2), p2)};
}

RunResult cmd_uhlmann(const RunConfig& cfg) {
  const auto [rho1, rho2] = load_state_pair(cfg);
  const KrausChannel psi = uhlmann_channel(rho1, rho2);
  const double dist = trace_distance(apply(psi, rho2), rho1);
  const StructureReport sr = structure_checks(psi);
  Json report = base_report(Json{{"majorization", kDefaultMajorizationTol}, {"trace_distance", kUhlmannTol}, {"channel", kChannelTol}});
  report["channel"] = io::to_json(psi);
  report["verified"] = Json{{"trace_distance", dist},
                            {"within_tol", dist <= kUhlmannTol},
                            {"trace_preserving", sr.trace_preserving},
                            {"unital", sr.unital},
                            {"completely_positive", sr.completely_positive}};
  return ok(report);
}

RunResult cmd_mixed_unitary(const RunConfig& cfg) {
  const auto [rho1, rho2] = load_state_pair(cfg);
  const MixedUnitary mu = mixed_unitary_uhlmann(rho1, rho2);
  const double dist = trace_norm_hermitian(mu.apply(rho2.matrix()) - rho1.matrix());
  double weight_sum = 0.0;
  double unitarity = 0.0;
  Json unitaries = Json::array();
  for (std::size_t i = 0; i < mu.weights.size(); ++i) {
    weight_sum += mu.weights[i];
    const auto& u = mu.unitaries[i];
    unitarity = std::max(unitarity, (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff());
    unitaries.push_back(io::to_json(u));
  }
  const std::size_t d = rho1.dimension();
  Json report = base_report(Json{{"majorization", kDefaultMajorizationTol}, {"birkhoff", 1e-12}, {"trace_distance", kUhlmannTol}});
  report["weights"] = mu.weights;
  report["unitaries"] = std::move(unitaries);
  report["verified"] = Json{{"trace_distance", dist},
                            {"within_tol", dist <= kUhlmannTol},
                            {"weight_sum", weight_sum},
                            {"max_unitarity_deviation", unitarity},
                            {"term_count", mu.weights.size()},
                            {"term_bound", (d - 1) * (d - 1) + 1}};
  return ok(report);
}

RunResult cmd_pinch_converge(const RunConfig& cfg) {
  require_inputs(cfg, 2);
  const std::string& path = input(cfg, 0, "rho2");
  const DensityMatrix rho2 = io::density_from_json(io::load_json(path), path);
  const auto n = static_cast<Eigen::Index>(rho2.dimension());
  ComplexMatrix basis = ComplexMatrix::Identity(n, n);
  if (cfg.inputs.size() > 1) basis = io::complex_matrix_from_json(io::load_json(cfg.inputs[1]), cfg.inputs[1]);
  const auto rows = pinch_convergence_experiment(rho2, basis);
  const double tol = cfg.tol.value_or(1e-8);
  bool bounded = true;
  for (const auto& r : rows) bounded = bounded && r.trace_distance <= r.bound + tol;
  std::string csv = io::convergence_csv(rows);
  csv += std::string("# version=") + kVersion + "\n";
  csv += "# tol=" + io::format_double(tol) + "\n";
  csv += std::string("# verified distance<=bound+tol: ") + (bounded ? "true" : "false") + "\n";
  csv += std::string("# verified final distance<=tol: ") + (rows.back().trace_distance <= tol ? "true" : "false") + "\n";
  return {kExitOk, csv, {}};
}

KrausChannel load_channel(const RunConfig& cfg) {
  require_inputs(cfg, 1);
  const std::string& path = input(cfg, 0, "channel");
  return io::channel_from_json(io::load_json(path), path);
}

RunResult cmd_detect_isometry(const RunConfig& cfg) {
  const KrausChannel phi = load_channel(cfg);
  const double tol = cfg.tol.value_or(kDefaultIsometryTol);
  const IsometryReport r = detect_isometry(phi, tol);
  Json report = base_report(Json{{"isometry", tol}, {"conjugation_residual", 10.0 * tol}});
  report.update(io::to_json(r));
  Json verified{{"checked_scalarity", true}, {"checked_rank_one_gram", true}};
  if (r.isometry) {
    const auto& v = *r.isometry;
    verified["isometry_deviation"] = (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  }
  report["verified"] = std::move(verified);
  const int code = (cfg.expect_isometry && !r.is_isometric_conjugation) ? kExitDomain : kExitOk;
  return ok(report, code);
}

RunResult cmd_probe_entropy(const RunConfig& cfg) {
  const KrausChannel phi = load_channel(cfg);
  const std::size_t d = cfg.d.value_or(phi.d_in());
  const std::size_t trials = cfg.trials.value_or(1000);
  Rng rng(cfg.seed);
  const ProbeResult pr = entropy_probe(phi, trials, d, rng);
  Json report = base_report(Json{{"state", kStateTol}, {"channel_output_state", 1e-7}});
  report["max_deviation"] = pr.max_deviation;
  report["worst_seed"] = pr.worst_seed;
  report["trials"] = trials;
  report["d"] = d;
  report["seed"] = cfg.seed;
  report["verified"] = Json{{"full_rank_states", true}};
  return ok(report);
}

KrausChannel random_bistochastic(std::size_t d, std::size_t terms, Rng& rng) {
  const ProbVector w = random_simplex(terms, rng);
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < terms; ++i) kraus.push_back(std::sqrt(w[i]) * random_unitary(d, rng));
  return KrausChannel(std::move(kraus), {true, true});
}

RunResult cmd_gen(const RunConfig& cfg) {
  require_inputs(cfg, 0);
  const std::size_t d = cfg.d.value_or(4);
  if (d == 0) throw UsageError("gen: --d must be at least 1");
  Rng rng(cfg.seed);
  Json report;
  if (cfg.what == "density") {
    report = io::to_json(random_density(d, rng));
  } else if (cfg.what == "prob-pair") {
    const auto [a, b] = random_majorized_pair(d, rng);
    report = Json{{"a", io::to_json(a)}, {"b", io::to_json(b)}};
  } else if (cfg.what == "state-pair") {
    const auto [a, b] = random_majorized_pair(d, rng);
    report = Json{{"rho1", io::to_json(random_density(d, rng, a))}, {"rho2", io::to_json(random_density(d, rng, b))}};
  } else if (cfg.what == "channel") {
    report = io::to_json(random_bistochastic(d, 3, rng));
  } else if (cfg.what == "isometry") {
    const ComplexMatrix v = random_unitary(d + 2, rng).leftCols(static_cast<Eigen::Index>(d));
    const Complex phase = std::polar(1.0, 0.25 * std::numbers::pi);
    report = io::to_json(KrausChannel({std::sqrt(1.0 / 3.0) * v, std::sqrt(2.0 / 3.0) * phase * v}, {true, false}));
  } else {
    throw UsageError("gen: unknown kind '" + cfg.what +
                     "' (expected density, prob-pair, state-pair, channel or isometry)");
  }
  report["version"] = kVersion;
  report["seed"] = cfg.seed;
  return ok(report);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"entropy",        "majorize",        "transfer",      "birkhoff",
                                              "schur-horn",     "uhlmann",         "mixed-unitary", "pinch-converge",
                                              "detect-isometry", "probe-entropy",  "gen"};
  return names;
}

RunResult dispatch(const RunConfig& cfg) {
  try {
    if (cfg.command == "entropy") return cmd_entropy(cfg);
    if (cfg.command == "majorize") return cmd_majorize(cfg);
    if (cfg.command == "transfer") return cmd_transfer(cfg);
    if (cfg.command == "birkhoff") return cmd_birkhoff(cfg);
    if (cfg.command == "schur-horn") return cmd_schur_horn(cfg);
    if (cfg.command == "uhlmann") return cmd_uhlmann(cfg);
    if (cfg.command == "mixed-unitary") return cmd_mixed_unitary(cfg);
    if (cfg.command == "pinch-converge") return cmd_pinch_converge(cfg);
    if (cfg.command == "detect-isometry") return cmd_detect_isometry(cfg);
    if (cfg.command == "probe-entropy") return cmd_probe_entropy(cfg);
    if (cfg.command == "gen") return cmd_gen(cfg);
    return {kExitFormat, {}, "unknown subcommand '" + cfg.command + "'"};
  } catch (const DomainError& e) {
    return {kExitDomain, {}, cfg.command + ": " + e.what()};
  } catch (const FormatError& e) {
    return {kExitFormat, {}, e.what()};
  } catch (const std::exception& e) {
    return {kExitFormat, {}, cfg.command + ": " + e.what()};
  }
}

namespace {

// Options that need presence detection before landing in RunConfig.
struct RawOptions {
  std::string out;
  double tol = 0.0;
  std::size_t d = 0;
  std::size_t trials = 0;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* d_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
};

void configure(CLI::App& app, RunConfig& cfg, RawOptions& raw) {
  app.set_version_flag("--version", kVersion);
  std::string names;
  for (const auto& n : subcommands()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", cfg.command, "Subcommand: " + names)->required();
  app.add_option("kind", cfg.what, "Generator kind for `gen`: density, prob-pair, state-pair, channel, isometry");
  app.add_option("--in", cfg.inputs, "Input path (repeatable, ordered)");
  app.add_option("--out", raw.out, "Output path (default: stdout)");
  app.add_option("--seed", cfg.seed, "Seed for randomized runs (default 0)");
  raw.tol_opt = app.add_option("--tol", raw.tol, "Tolerance override");
  raw.d_opt = app.add_option("--d", raw.d, "Dimension");
  raw.trials_opt = app.add_option("--trials", raw.trials, "Trial count for probe-entropy (default 1000)");
  app.add_flag("--require", cfg.require, "Exit 1 when a majorization verdict is negative");
  app.add_flag("--expect-isometry", cfg.expect_isometry, "Exit 1 when the isometry detector is negative");
}

void finish(RunConfig& cfg, const RawOptions& raw) {
  if (!raw.out.empty()) cfg.output = raw.out;
  if (*raw.tol_opt) cfg.tol = raw.tol;
  if (*raw.d_opt) cfg.d = raw.d;
  if (*raw.trials_opt) cfg.trials = raw.trials;
}

}  // namespace

RunConfig parse_args(std::vector<std::string> args) {
  CLI::App app{"majent"};
  RunConfig cfg;
  RawOptions raw;
  configure(app, cfg, raw);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    throw FormatError(std::string("usage: ") + e.what());
  }
  finish(cfg, raw);
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Majorization, entropy and quantum channel toolkit"};
  RunConfig cfg;
  RawOptions raw;
  configure(app, cfg, raw);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFormat;
  }
  finish(cfg, raw);

  const RunResult result = dispatch(cfg);
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  if (!result.report.empty()) {
    if (cfg.output) {
      std::ofstream f(*cfg.output);
      if (!(f << result.report)) {
        std::cerr << "error: " << *cfg.output << ": cannot write output\n";
        return kExitFormat;
      }
    } else {
      std::cout << result.report;
    }
  }
  return result.exit_code;
}

}  // namespace majent::cli
