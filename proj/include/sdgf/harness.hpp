#ifndef SDGF_HARNESS_HPP
#define SDGF_HARNESS_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdgf/gabor.hpp"
#include "sdgf/sensing.hpp"
#include "sdgf/signals.hpp"
#include "sdgf/zauner.hpp"

namespace sdgf {

enum class X0Rule {
  Zero,                  // x0 = 0
  AdjointMeasurements,   // x0 = A^T y
};

std::string_view to_string(X0Rule rule);
X0Rule x0_rule_from_string(std::string_view name);

struct ExperimentPlan {
  Signal signal;
  GaborParams params;
  int sweep_points = 20;
  int repetitions = 10;
  Real sigma = 0.001;
  Real C = 1.0;  // mu_i = C * ||Phi_i x||_inf
  X0Rule x0_rule = X0Rule::Zero;
  EtaRule eta_rule = EtaRule::Expected;
  std::vector<WindowKind> windows{WindowKind::Gaussian, WindowKind::Hann, WindowKind::Hamming,
                                  WindowKind::Star};
  std::uint64_t master_seed = 7;
  bool positive_frequency = true;
  int max_iterations = 5000;
  Real dual_tolerance = 1e-6;
  int threads = 1;
  StarWindowOptions star;
  // Precomputed star window (e.g. loaded from CSV); computed from `star`
  // options when absent.
  std::optional<WindowVector> star_window;
  // Operators with at most this many coefficient-by-sample entries are
  // materialized as dense matrices.
  double dense_entry_limit = 4e6;
};

// `points` evenly spaced integers in [1, L], rounded, duplicates removed.
std::vector<Index> sweep_counts(Index L, int points);

struct CurvePoint {
  Index K = 0;
  int rep_count = 0;
  Real median = 0.0;  // of ||x - x_hat||_2 / ||x||_2
  Real q25 = 0.0;
  Real q75 = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct WindowCurve {
  WindowKind window = WindowKind::Custom;
  std::vector<CurvePoint> points;
  std::vector<Real> median_iterations;  // per point; not part of the CSV
};

struct ExperimentResult {
  std::string signal;
  GaborParams params;
  std::uint64_t seed = 0;
  std::vector<WindowCurve> curves;
  bool complete = true;  // false when interrupted; only finished K are kept

  std::size_t row_count() const;
};

// Linear-interpolation quantile of unsorted samples, q in [0, 1].
Real quantile(std::vector<Real> values, Real q);

// For each K and repetition: fresh subsampling and noise shared by all
// windows, one regularized solve per window. Setting *cancel stops
// scheduling; finished K points are returned with complete = false.
ExperimentResult run_experiment(const ExperimentPlan& plan,
                                const std::atomic<bool>* cancel = nullptr);

// signal,window,L,a,b,K,rep_count,median_rel_err,q25,q75,seed
void write_result_csv(const std::string& path, const ExperimentResult& result);
ExperimentResult read_result_csv(const std::string& path);
// Plan echo and per-point median iteration counts.
void write_result_metadata(const std::string& path, const ExperimentPlan& plan,
                           const ExperimentResult& result);
// One curve per window over K, log-scale error axis.
void write_result_svg(const std::string& path, const ExperimentResult& result);

std::string_view window_color(WindowKind kind);

// Named parameter rows: signal, lattice, x0 rule and C for the reference runs.
struct Preset {
  std::string label;
  Index samples = 0;
  Index L = 0, a = 0, b = 0;
  X0Rule x0_rule = X0Rule::Zero;
  Real C = 1.0;
  std::optional<SyntheticKind> synthetic;
};

const std::vector<Preset>& presets();
std::optional<Preset> find_preset(std::string_view label);  // case-insensitive

}  // namespace sdgf

#endif  // SDGF_HARNESS_HPP
