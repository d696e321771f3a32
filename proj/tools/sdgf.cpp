// Command-line front end: windows, transforms, spark analysis, single
// recoveries and full measurement sweeps.
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdgf/csv.hpp"
#include "sdgf/gabor.hpp"
#include "sdgf/harness.hpp"
#include "sdgf/modring.hpp"
#include "sdgf/sensing.hpp"
#include "sdgf/signals.hpp"
#include "sdgf/solver.hpp"
#include "sdgf/spark.hpp"
#include "sdgf/zauner.hpp"

using namespace sdgf;

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

int default_threads() {
  if (const char* env = std::getenv("SDGF_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring SDGF_THREADS='" << env << "'\n";
  }
  return 1;
}

WindowVector resolve_window(const std::string& kind_or_file, Index L, const StarWindowOptions& star) {
  for (auto kind : {WindowKind::Gaussian, WindowKind::Hann, WindowKind::Hamming, WindowKind::Star}) {
    if (kind_or_file == to_string(kind)) {
      if (L <= 0) throw Error(ErrorCode::InvalidArgument, "--L is required for window '" + kind_or_file + "'");
      return kind == WindowKind::Star ? star_window(L, star).vector : make_window(kind, L);
    }
  }
  WindowVector w = load_window(kind_or_file);
  if (L > 0 && w.size() != L) {
    throw Error(ErrorCode::DimensionMismatch, "window file has length " + std::to_string(w.size()) +
                                                  ", expected L = " + std::to_string(L));
  }
  return w;
}

std::vector<WindowKind> parse_window_list(const std::string& list) {
  std::vector<WindowKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const WindowKind k = window_kind_from_string(item);
    if (k == WindowKind::Custom) throw Error(ErrorCode::InvalidArgument, "window 'custom' needs a file");
    out.push_back(k);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty window list");
  return out;
}

// Options shared by `solve` and `experiment` for picking the signal.
struct SignalOptions {
  std::string synthetic;
  std::string wav;
  std::string preset;
  Index L = 0, a = 0, b = 0;
  Index offset = 0;
  bool strict = false;
  Real C = 1.0;
  std::string x0 = "zero";
};

void add_signal_options(CLI::App* cmd, SignalOptions& o) {
  cmd->add_option("--signal", o.synthetic, "Synthetic signal: cusp, ramp or sing")
      ->check(CLI::IsMember({"cusp", "ramp", "sing"}));
  cmd->add_option("--wav", o.wav, "Mono WAV file (16-bit PCM or 32-bit float)");
  cmd->add_option("--preset", o.preset,
                  "Preset parameter row: Cusp, Ramp, Sing (L,a,b from the row, C = 1, x0 = zero) "
                  "or SI1899, SI1948, SI2141, SX5, SX224, SI1716 (need --wav; C = 0.1, "
                  "SI1716 C = 1, x0 = adjoint). Explicit flags override");
  cmd->add_option("--L", o.L, "Ambient dimension; for --wav the first L samples after --offset are "
                              "kept (default: largest admissible length)");
  cmd->add_option("--a", o.a, "Time step (must divide L)");
  cmd->add_option("--b", o.b, "Frequency step (must divide L)");
  cmd->add_option("--offset", o.offset, "First WAV sample kept")->capture_default_str();
  cmd->add_flag("--strict", o.strict, "Require square-free L when trimming WAV input");
  cmd->add_option("--C", o.C, "mu = C * ||Phi x||_inf (C = 1 synthetic rows, 0.1 speech rows)")
      ->capture_default_str();
  cmd->add_option("--x0", o.x0, "Initial guess: zero or adjoint (A^T y)")
      ->check(CLI::IsMember({"zero", "adjoint"}))
      ->capture_default_str();
}

struct ResolvedSignal {
  Signal signal;
  GaborParams params;
  Real C;
  X0Rule x0;
};

ResolvedSignal resolve_signal(const CLI::App* cmd, const SignalOptions& o) {
  Index L = o.L, a = o.a, b = o.b;
  Real C = o.C;
  X0Rule x0 = x0_rule_from_string(o.x0);
  std::optional<SyntheticKind> synthetic;
  if (!o.synthetic.empty()) synthetic = synthetic_kind_from_string(o.synthetic);
  if (!o.preset.empty()) {
    const auto p = find_preset(o.preset);
    if (!p) throw CLI::ValidationError("--preset", "unknown preset '" + o.preset + "'");
    if (cmd->count("--L") == 0) L = p->L;
    if (cmd->count("--a") == 0) a = p->a;
    if (cmd->count("--b") == 0) b = p->b;
    if (cmd->count("--C") == 0) C = p->C;
    if (cmd->count("--x0") == 0) x0 = p->x0_rule;
    if (!synthetic && o.wav.empty()) {
      if (!p->synthetic) {
        throw CLI::ValidationError("--preset", "preset '" + p->label + "' needs --wav");
      }
      synthetic = p->synthetic;
    }
  }
  if (synthetic.has_value() == !o.wav.empty()) {
    throw CLI::ValidationError("signal", "give exactly one of --signal, --wav or --preset");
  }
  ResolvedSignal out;
  if (synthetic) {
    if (L <= 0) throw CLI::ValidationError("--L", "--L is required for synthetic signals");
    out.signal = make_synthetic(*synthetic, L);
  } else {
    AudioTrim trim;
    if (L > 0) trim.L = L;
    trim.offset = o.offset;
    trim.mode = o.strict ? AdmissibilityMode::Strict : AdmissibilityMode::Relaxed;
    out.signal = load_audio(o.wav, trim);
    L = out.signal.size();
  }
  if (a <= 0 || b <= 0) throw CLI::ValidationError("lattice", "--a and --b are required");
  out.params = GaborParams::make(L, a, b);
  out.C = C;
  out.x0 = x0;
  return out;
}

// ---------------------------------------------------------------------------

int cmd_admissible(std::int64_t n, bool strict) {
  const auto mode = strict ? AdmissibilityMode::Strict : AdmissibilityMode::Relaxed;
  const auto here = is_admissible_length(n, mode);
  const std::int64_t L = largest_admissible_at_most(n, mode);
  std::cout << L << " = " << factorize(L).to_string() << '\n';
  if (n >= 2) {
    std::cout << n << (here.admissible ? " is" : " is not") << " admissible ("
              << (strict ? "strict" : "relaxed") << " mode); " << n << " = "
              << factorize(n).to_string() << '\n';
  }
  return 0;
}

int cmd_window(const std::string& kind, Index L, const std::string& out, const StarWindowOptions& star) {
  const WindowKind k = window_kind_from_string(kind);
  if (k == WindowKind::Custom) throw CLI::ValidationError("--kind", "choose gaussian, hann, hamming or star");
  if (k == WindowKind::Star) {
    const StarWindow s = star_window(L, star);
    save_window(out, s.vector);
    std::cout << "star window L=" << L << " eigenvalue=" << format_double(s.eigenvalue.real())
              << (s.eigenvalue.imag() < 0 ? "" : "+") << format_double(s.eigenvalue.imag())
              << "i residual=" << format_double(s.residual) << '\n';
  } else {
    save_window(out, make_window(k, L));
  }
  return 0;
}

int cmd_dgt(const std::string& window_path, Index a, Index b, const std::string& in,
            const std::string& out, bool positive) {
  const WindowVector g = load_window(window_path);
  const CVector x = read_vector_csv(in);
  if (x.size() != g.size()) {
    throw Error(ErrorCode::DimensionMismatch, "signal has length " + std::to_string(x.size()) +
                                                  " but the window has length " +
                                                  std::to_string(g.size()));
  }
  const AnalysisOperator op(g, GaborParams::make(g.size(), a, b), positive);
  write_coefficients_csv(out, op.dgt(x));
  return 0;
}

struct SparkOptions {
  Index L = 0, a = 1, b = 1;
  std::string window = "star";
  std::int64_t trials = 0;
  Index subset = 0;
  std::uint64_t seed = 1;
  Real tol = kDefaultRankTolerance;
  std::string json;
  bool positive = false;
};

int cmd_spark(const SparkOptions& o, const StarWindowOptions& star) {
  const WindowVector g = resolve_window(o.window, o.L, star);
  const AnalysisOperator op(g, GaborParams::make(g.size(), o.a, o.b), o.positive);
  SparkReport report;
  if (o.trials > 0) {
    const Index size = o.subset > 0 ? o.subset : g.size();
    report = deficiency_witness_search(op, o.trials, size, o.seed, o.tol);
  } else {
    report = spark_exhaustive(frame_matrix(op), o.tol);
  }
  std::cout << report.to_text();
  if (!o.json.empty()) {
    std::ofstream f(o.json, std::ios::binary);
    if (!f) throw Error(ErrorCode::IOFailure, "cannot open '" + o.json + "' for writing");
    f << report.to_json() << '\n';
  }
  return 0;
}

struct SolveOptions {
  std::string window = "star";
  Index K = 0;
  std::uint64_t seed = 7;
  Real sigma = 0.001;
  std::string eta_rule = "expected";
  int max_iterations = 5000;
  Real dual_tolerance = 1e-6;
  bool full_frequency = false;
  bool constrained = false;
  std::string out;
  bool verbose = false;
};

int cmd_solve(const CLI::App* cmd, const SignalOptions& so, const SolveOptions& o,
              const StarWindowOptions& star) {
  const ResolvedSignal rs = resolve_signal(cmd, so);
  const Index L = rs.params.L;
  const Index K = o.K > 0 ? o.K : L;
  const WindowVector g = resolve_window(o.window, L, star);
  const AnalysisOperator phi(g, rs.params, !o.full_frequency);
  const MeasurementOperator A = sample_operator(L, K, derive_seed(o.seed, {static_cast<std::uint64_t>(K), 0, 1}));
  const Vector& x = rs.signal.samples;
  const NoisyMeasurements meas =
      corrupt(A.apply(x), {o.sigma, derive_seed(o.seed, {static_cast<std::uint64_t>(K), 0, 2})});
  SolveConfig cfg;
  cfg.mu = o.constrained ? 0.0 : mu_from_rule(phi, x, rs.C);
  cfg.eta = meas.radius(o.eta_rule == "exact" ? EtaRule::Exact : EtaRule::Expected);
  cfg.max_iterations = o.max_iterations;
  cfg.dual_tolerance = o.dual_tolerance;
  if (rs.x0 == X0Rule::AdjointMeasurements) cfg.x0 = A.adjoint_apply(meas.y);
  if (o.verbose) cfg.log = &std::cerr;
  const SolveResult r = solve_analysis_l1(phi, A, meas.y, cfg);
  std::cout << "signal=" << rs.signal.label << " L=" << L << " a=" << rs.params.a
            << " b=" << rs.params.b << " window=" << to_string(g.kind) << " K=" << K << '\n'
            << "mu=" << format_double(cfg.mu) << " eta=" << format_double(cfg.eta) << '\n'
            << "relative_error=" << format_double((x - r.solution).norm() / x.norm()) << '\n'
            << "objective=" << format_double(r.objective)
            << " slack=" << format_double(r.constraint_slack) << '\n'
            << "iterations=" << r.iterations << " converged=" << (r.converged ? "yes" : "no") << '\n';
  if (!o.out.empty()) write_vector_csv(o.out, r.solution);
  return 0;
}

struct ExperimentOptions {
  int points = 20;
  int reps = 10;
  std::uint64_t seed = 7;
  Real sigma = 0.001;
  std::string eta_rule = "expected";
  std::string windows = "gaussian,hann,hamming,star";
  std::string csv;
  std::string plot;
  int threads = 1;
  int max_iterations = 5000;
  Real dual_tolerance = 1e-6;
  bool full_frequency = false;
  std::string star_file;
};

int cmd_experiment(const CLI::App* cmd, const SignalOptions& so, const ExperimentOptions& o,
                   const StarWindowOptions& star) {
  const ResolvedSignal rs = resolve_signal(cmd, so);
  ExperimentPlan plan;
  plan.signal = rs.signal;
  plan.params = rs.params;
  plan.sweep_points = o.points;
  plan.repetitions = o.reps;
  plan.sigma = o.sigma;
  plan.C = rs.C;
  plan.x0_rule = rs.x0;
  plan.eta_rule = o.eta_rule == "exact" ? EtaRule::Exact : EtaRule::Expected;
  plan.windows = parse_window_list(o.windows);
  plan.master_seed = o.seed;
  plan.positive_frequency = !o.full_frequency;
  plan.max_iterations = o.max_iterations;
  plan.dual_tolerance = o.dual_tolerance;
  plan.threads = o.threads;
  plan.star = star;
  if (!o.star_file.empty()) plan.star_window = load_window(o.star_file, WindowKind::Star);

  const std::string csv = o.csv.empty() ? rs.signal.label + ".csv" : o.csv;
  const std::string plot = o.plot.empty() ? rs.signal.label + ".svg" : o.plot;

  std::signal(SIGINT, on_sigint);
  const ExperimentResult result = run_experiment(plan, &g_interrupted);
  std::signal(SIGINT, SIG_DFL);

  if (result.row_count() > 0) {
    write_result_csv(csv, result);
    write_result_metadata(csv + ".meta", plan, result);
    write_result_svg(plot, result);
  }
  if (!result.complete) {
    std::cerr << "interrupted: wrote " << result.row_count() << " finished rows to " << csv << '\n';
    return kExitFailure;
  }
  std::cout << "wrote " << result.row_count() << " rows to " << csv << ", plot " << plot << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spark-deficient Gabor frames and analysis-l1 recovery experiments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  StarWindowOptions star;
  auto add_star_options = [&](CLI::App* cmd) {
    cmd->add_option("--theta", star.theta, "Phase of the metaplectic unitary (radians)")
        ->capture_default_str();
    cmd->add_option("--star-seed", star.seed, "Seed of the star-window eigenvector projection")
        ->capture_default_str();
  };

  std::int64_t adm_n = 0;
  bool adm_strict = false;
  auto* adm = app.add_subcommand("admissible", "Largest admissible length <= n and its factors");
  adm->add_option("n", adm_n, "Upper bound (>= 3)")->required();
  adm->add_flag("--strict", adm_strict, "Also require L square-free");

  std::string win_kind, win_out;
  Index win_L = 0;
  auto* win = app.add_subcommand("window", "Compute a unit-norm window and save it as CSV");
  win->add_option("--kind", win_kind, "gaussian, hann, hamming or star")
      ->required()
      ->check(CLI::IsMember({"gaussian", "hann", "hamming", "star"}));
  win->add_option("--L", win_L, "Window length")->required();
  win->add_option("--out", win_out, "Output CSV (real,imag)")->required();
  add_star_options(win);

  std::string dgt_window, dgt_in, dgt_out;
  Index dgt_a = 0, dgt_b = 0;
  bool dgt_positive = false;
  auto* dgt = app.add_subcommand("dgt", "Digital Gabor transform of a signal");
  dgt->add_option("--window", dgt_window, "Window CSV")->required();
  dgt->add_option("--a", dgt_a, "Time step")->required();
  dgt->add_option("--b", dgt_b, "Frequency step")->required();
  dgt->add_option("--in", dgt_in, "Signal CSV (one column, or real,imag)")->required();
  dgt->add_option("--out", dgt_out, "Coefficient CSV (m,n,real,imag)")->required();
  dgt->add_flag("--positive", dgt_positive, "Keep only frequencies m = 0..floor(M/2)");

  SparkOptions sp;
  auto* spark = app.add_subcommand("spark", "Exhaustive spark or randomized deficiency witness");
  spark->add_option("--L", sp.L, "Dimension (needed unless --window is a file)");
  spark->add_option("--a", sp.a, "Time step")->capture_default_str();
  spark->add_option("--b", sp.b, "Frequency step")->capture_default_str();
  spark->add_option("--window", sp.window, "gaussian, hann, hamming, star or a window CSV")
      ->capture_default_str();
  spark->add_option("--trials", sp.trials,
                    "Random subsets to test; 0 runs the exhaustive search")
      ->capture_default_str();
  spark->add_option("--subset-size", sp.subset, "Subset size for the random search (default L)");
  spark->add_option("--seed", sp.seed, "Seed of the random search")->capture_default_str();
  spark->add_option("--tol", sp.tol, "Relative singular-value tolerance")->capture_default_str();
  spark->add_option("--json", sp.json, "Also write the report as JSON");
  spark->add_flag("--positive", sp.positive, "Use the non-negative-frequency rows only");
  add_star_options(spark);

  SignalOptions solve_sig;
  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "One subsampled, noisy recovery");
  add_signal_options(solve, solve_sig);
  solve->add_option("--window", so.window, "gaussian, hann, hamming, star or a window CSV")
      ->capture_default_str();
  solve->add_option("--K", so.K, "Number of measurements (default L)");
  solve->add_option("--seed", so.seed, "Master seed for sampling and noise")->capture_default_str();
  solve->add_option("--sigma", so.sigma, "Noise standard deviation")->capture_default_str();
  solve->add_option("--eta-rule", so.eta_rule, "expected (sigma sqrt K) or exact (||e||)")
      ->check(CLI::IsMember({"expected", "exact"}))
      ->capture_default_str();
  solve->add_option("--max-iter", so.max_iterations, "Iteration cap")->capture_default_str();
  solve->add_option("--tol", so.dual_tolerance, "Relative objective change over 50 iterations")
      ->capture_default_str();
  solve->add_flag("--full-frequency", so.full_frequency, "Use all M frequency rows");
  solve->add_flag("--constrained", so.constrained,
                  "Solve the constrained problem (mu = 0) instead of the mu-regularized one");
  solve->add_option("--out", so.out, "Write the recovered signal as CSV");
  solve->add_flag("--verbose", so.verbose, "Log iterations to stderr");
  add_star_options(solve);

  SignalOptions exp_sig;
  ExperimentOptions eo;
  eo.threads = default_threads();
  auto* exp = app.add_subcommand("experiment", "Sweep K, recover with every window, emit CSV and plot");
  add_signal_options(exp, exp_sig);
  exp->add_option("--points", eo.points, "Evenly spaced measurement counts in [1, L]")
      ->capture_default_str();
  exp->add_option("--reps", eo.reps, "Repetitions per count (paired across windows)")
      ->capture_default_str();
  exp->add_option("--seed", eo.seed, "Master seed")->capture_default_str();
  exp->add_option("--sigma", eo.sigma, "Noise standard deviation")->capture_default_str();
  exp->add_option("--eta-rule", eo.eta_rule, "expected (sigma sqrt K) or exact (||e||)")
      ->check(CLI::IsMember({"expected", "exact"}))
      ->capture_default_str();
  exp->add_option("--windows", eo.windows, "Comma-separated window list")->capture_default_str();
  exp->add_option("--csv", eo.csv, "Result CSV (default <signal>.csv); metadata goes to <csv>.meta");
  exp->add_option("--plot", eo.plot, "SVG plot (default <signal>.svg)");
  exp->add_option("--threads", eo.threads, "Worker threads (default from SDGF_THREADS, else 1)")
      ->capture_default_str();
  exp->add_option("--max-iter", eo.max_iterations, "Iteration cap per solve")->capture_default_str();
  exp->add_option("--tol", eo.dual_tolerance, "Relative objective change over 50 iterations")
      ->capture_default_str();
  exp->add_flag("--full-frequency", eo.full_frequency, "Use all M frequency rows");
  exp->add_option("--star-window", eo.star_file, "Precomputed star window CSV");
  add_star_options(exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (adm->parsed()) return cmd_admissible(adm_n, adm_strict);
    if (win->parsed()) return cmd_window(win_kind, win_L, win_out, star);
    if (dgt->parsed()) return cmd_dgt(dgt_window, dgt_a, dgt_b, dgt_in, dgt_out, dgt_positive);
    if (spark->parsed()) return cmd_spark(sp, star);
    if (solve->parsed()) return cmd_solve(solve, solve_sig, so, star);
    if (exp->parsed()) return cmd_experiment(exp, exp_sig, eo, star);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
