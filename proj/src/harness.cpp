#include "sdgf/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "sdgf/csv.hpp"
#include "sdgf/solver.hpp"

namespace sdgf {

std::string_view to_string(X0Rule rule) {
  return rule == X0Rule::Zero ? "zero" : "adjoint";
}

X0Rule x0_rule_from_string(std::string_view name) {
  if (name == "zero") return X0Rule::Zero;
  if (name == "adjoint") return X0Rule::AdjointMeasurements;
  throw Error(ErrorCode::InvalidArgument, "x0 rule must be 'zero' or 'adjoint'");
}

std::vector<Index> sweep_counts(Index L, int points) {
  if (L < 1 || points < 1) throw Error(ErrorCode::InvalidArgument, "need L >= 1 and points >= 1");
  std::vector<Index> ks;
  if (points == 1) return {L};
  for (int j = 0; j < points; ++j) {
    const double k = 1.0 + static_cast<double>(j) * static_cast<double>(L - 1) / (points - 1);
    const Index rounded = static_cast<Index>(std::lround(k));
    if (ks.empty() || ks.back() != rounded) ks.push_back(rounded);
  }
  return ks;
}

std::size_t ExperimentResult::row_count() const {
  std::size_t n = 0;
  for (const auto& c : curves) n += c.points.size();
  return n;
}

Real quantile(std::vector<Real> values, Real q) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of empty sample");
  std::sort(values.begin(), values.end());
  const Real pos = q * static_cast<Real>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const Real frac = pos - static_cast<Real>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

namespace {

using AnyMap = std::variant<DenseAnalysisMap, AnalysisOperator>;

struct PreparedWindow {
  WindowKind kind;
  AnyMap map;
  Real mu = 0.0;
  Real norm = 0.0;
};

WindowVector window_for(const ExperimentPlan& plan, WindowKind kind) {
  const Index L = plan.params.L;
  if (kind != WindowKind::Star) return make_window(kind, L);
  if (plan.star_window) {
    if (plan.star_window->size() != L) {
      throw Error(ErrorCode::DimensionMismatch, "star window length does not match L");
    }
    return WindowVector(plan.star_window->samples, WindowKind::Star);
  }
  return star_window(L, plan.star).vector;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentPlan& plan, const std::atomic<bool>* cancel) {
  const GaborParams& params = plan.params;
  const Index L = params.L;
  const Vector& x = plan.signal.samples;
  if (x.size() != L) {
    throw Error(ErrorCode::DimensionMismatch, "signal length " + std::to_string(x.size()) +
                                                  " != L " + std::to_string(L));
  }
  const Real x_norm = x.norm();
  if (!(x_norm > 0.0)) throw Error(ErrorCode::InvalidArgument, "signal has zero norm");
  if (plan.repetitions < 1) throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  if (plan.windows.empty()) throw Error(ErrorCode::InvalidArgument, "no windows selected");

  std::vector<PreparedWindow> windows;
  for (WindowKind kind : plan.windows) {
    AnalysisOperator op(window_for(plan, kind), params, plan.positive_frequency);
    const double entries = static_cast<double>(op.rows()) * static_cast<double>(op.cols());
    AnyMap map = entries <= plan.dense_entry_limit ? AnyMap(DenseAnalysisMap(frame_matrix(op)))
                                                   : AnyMap(std::move(op));
    PreparedWindow w{kind, std::move(map)};
    std::visit(
        [&](const auto& m) {
          w.mu = mu_from_rule(m, x, plan.C);
          w.norm = operator_norm_estimate(m);
        },
        w.map);
    windows.push_back(std::move(w));
  }

  const std::vector<Index> ks = sweep_counts(L, plan.sweep_points);
  const std::size_t n_k = ks.size(), n_rep = static_cast<std::size_t>(plan.repetitions);
  const std::size_t n_w = windows.size();
  const std::size_t n_tasks = n_k * n_rep;
  // errors[w][task], task = k * n_rep + rep
  std::vector<std::vector<Real>> errors(n_w, std::vector<Real>(n_tasks, 0.0));
  std::vector<std::vector<Real>> iterations(n_w, std::vector<Real>(n_tasks, 0.0));
  std::vector<char> done(n_tasks, 0);

  auto run_task = [&](std::size_t task) {
    const std::size_t j = task / n_rep, rep = task % n_rep;
    const Index K = ks[j];
    const auto k_key = static_cast<std::uint64_t>(K), r_key = static_cast<std::uint64_t>(rep);
    const MeasurementOperator A = sample_operator(L, K, derive_seed(plan.master_seed, {k_key, r_key, 1}));
    const NoisyMeasurements meas =
        corrupt(A.apply(x), NoiseModel{plan.sigma, derive_seed(plan.master_seed, {k_key, r_key, 2})});
    SolveConfig cfg;
    cfg.eta = meas.radius(plan.eta_rule);
    cfg.max_iterations = plan.max_iterations;
    cfg.dual_tolerance = plan.dual_tolerance;
    if (plan.x0_rule == X0Rule::AdjointMeasurements) cfg.x0 = A.adjoint_apply(meas.y);
    for (std::size_t w = 0; w < n_w; ++w) {
      cfg.mu = windows[w].mu;
      cfg.operator_norm = windows[w].norm;
      const SolveResult r = std::visit(
          [&](const auto& m) { return solve_analysis_l1(m, A, meas.y, cfg); }, windows[w].map);
      errors[w][task] = (x - r.solution).norm() / x_norm;
      iterations[w][task] = r.iterations;
    }
    done[task] = 1;
  };

  const int threads = std::max(1, plan.threads);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&]() {
    while (true) {
      if (cancel && cancel->load()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        run_task(task);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.signal = plan.signal.label;
  result.params = params;
  result.seed = plan.master_seed;
  result.complete = std::all_of(done.begin(), done.end(), [](char d) { return d != 0; });
  for (std::size_t w = 0; w < n_w; ++w) {
    WindowCurve curve;
    curve.window = windows[w].kind;
    for (std::size_t j = 0; j < n_k; ++j) {
      const auto first = errors[w].begin() + static_cast<std::ptrdiff_t>(j * n_rep);
      const auto first_done = done.begin() + static_cast<std::ptrdiff_t>(j * n_rep);
      if (!std::all_of(first_done, first_done + static_cast<std::ptrdiff_t>(n_rep),
                       [](char d) { return d != 0; })) {
        continue;
      }
      std::vector<Real> errs(first, first + static_cast<std::ptrdiff_t>(n_rep));
      const auto it_first = iterations[w].begin() + static_cast<std::ptrdiff_t>(j * n_rep);
      std::vector<Real> its(it_first, it_first + static_cast<std::ptrdiff_t>(n_rep));
      curve.points.push_back(CurvePoint{ks[j], plan.repetitions, quantile(errs, 0.5),
                                        quantile(errs, 0.25), quantile(errs, 0.75)});
      curve.median_iterations.push_back(quantile(its, 0.5));
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

const char* kCsvHeader = "signal,window,L,a,b,K,rep_count,median_rel_err,q25,q75,seed";

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "' for writing");
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_result_csv(const std::string& path, const ExperimentResult& result) {
  if (result.row_count() == 0) throw Error(ErrorCode::InvalidArgument, "empty result");
  auto out = open_out(path);
  out << kCsvHeader << '\n';
  for (const auto& curve : result.curves) {
    for (const auto& p : curve.points) {
      out << result.signal << ',' << to_string(curve.window) << ',' << result.params.L << ','
          << result.params.a << ',' << result.params.b << ',' << p.K << ',' << p.rep_count << ','
          << format_double(p.median) << ',' << format_double(p.q25) << ','
          << format_double(p.q75) << ',' << result.seed << '\n';
    }
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IOFailure, "write to '" + path + "' failed");
}

ExperimentResult read_result_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::UnsupportedFormat, "'" + path + "' lacks the result header");
  }
  ExperimentResult result;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 11) throw Error(ErrorCode::UnsupportedFormat, "bad row: " + line);
    const auto as_index = [](const std::string& s) { return static_cast<Index>(std::stoll(s)); };
    if (first) {
      result.signal = f[0];
      result.params = GaborParams::make(as_index(f[2]), as_index(f[3]), as_index(f[4]));
      result.seed = std::stoull(f[10]);
      first = false;
    }
    const WindowKind kind = window_kind_from_string(f[1]);
    auto it = std::find_if(result.curves.begin(), result.curves.end(),
                           [&](const WindowCurve& c) { return c.window == kind; });
    if (it == result.curves.end()) {
      result.curves.push_back(WindowCurve{kind, {}, {}});
      it = result.curves.end() - 1;
    }
    it->points.push_back(CurvePoint{as_index(f[5]), std::stoi(f[6]), parse_double(f[7]),
                                    parse_double(f[8]), parse_double(f[9])});
  }
  return result;
}

void write_result_metadata(const std::string& path, const ExperimentPlan& plan,
                           const ExperimentResult& result) {
  auto out = open_out(path);
  out << "signal=" << result.signal << '\n';
  out << "L=" << plan.params.L << "\na=" << plan.params.a << "\nb=" << plan.params.b << '\n';
  out << "sweep_points=" << plan.sweep_points << "\nrepetitions=" << plan.repetitions << '\n';
  out << "sigma=" << format_double(plan.sigma) << "\nC=" << format_double(plan.C) << '\n';
  out << "x0=" << to_string(plan.x0_rule) << '\n';
  out << "eta=" << (plan.eta_rule == EtaRule::Expected ? "sigma_sqrt_K" : "noise_norm") << '\n';
  out << "positive_frequency=" << (plan.positive_frequency ? 1 : 0) << '\n';
  out << "seed=" << plan.master_seed << '\n';
  out << "max_iterations=" << plan.max_iterations << '\n';
  out << "complete=" << (result.complete ? 1 : 0) << '\n';
  for (const auto& curve : result.curves) {
    out << "median_iterations." << to_string(curve.window) << '=';
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
      if (i) out << ' ';
      out << curve.points[i].K << ':' << format_double(curve.median_iterations[i]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IOFailure, "write to '" + path + "' failed");
}

std::string_view window_color(WindowKind kind) {
  switch (kind) {
    case WindowKind::Gaussian: return "red";
    case WindowKind::Hann: return "magenta";
    case WindowKind::Hamming: return "black";
    case WindowKind::Star: return "blue";
    case WindowKind::Custom: return "gray";
  }
  return "gray";
}

void write_result_svg(const std::string& path, const ExperimentResult& result) {
  if (result.row_count() == 0) throw Error(ErrorCode::InvalidArgument, "empty result");
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 140, top = 40, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double k_min = std::numeric_limits<double>::infinity(), k_max = -k_min;
  double e_min = std::numeric_limits<double>::infinity(), e_max = -e_min;
  for (const auto& c : result.curves) {
    for (const auto& p : c.points) {
      k_min = std::min(k_min, static_cast<double>(p.K));
      k_max = std::max(k_max, static_cast<double>(p.K));
      if (p.median > 0.0) {
        e_min = std::min(e_min, p.median);
        e_max = std::max(e_max, p.median);
      }
    }
  }
  if (!std::isfinite(e_min)) e_min = e_max = 1.0;
  const double dec_lo = std::floor(std::log10(e_min));
  double dec_hi = std::ceil(std::log10(e_max));
  if (dec_hi <= dec_lo) dec_hi = dec_lo + 1;
  if (k_max <= k_min) k_max = k_min + 1;
  const double floor_value = std::pow(10.0, dec_lo);
  auto px = [&](double k) { return left + (k - k_min) / (k_max - k_min) * plot_w; };
  auto py = [&](double e) {
    const double v = std::log10(std::max(e, floor_value));
    return top + (dec_hi - v) / (dec_hi - dec_lo) * plot_h;
  };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"22\" text-anchor=\"middle\">"
      << result.signal << " (L,a,b) = (" << result.params.L << ',' << result.params.a << ','
      << result.params.b << ")</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = dec_lo; d <= dec_hi; d += 1.0) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << fixed(y) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << fixed(y + 4)
        << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double k = k_min + (k_max - k_min) * t / 4.0;
    out << "<text x=\"" << fixed(px(k)) << "\" y=\"" << fixed(top + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fixed(k, 0) << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">measurements K</text>\n";
  out << "<text x=\"18\" y=\"" << fixed(top + plot_h / 2) << "\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 18 " << fixed(top + plot_h / 2)
      << ")\">relative error</text>\n";
  double legend_y = top + 10;
  for (const auto& c : result.curves) {
    const auto color = window_color(c.window);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i) out << ' ';
      out << fixed(px(static_cast<double>(c.points[i].K))) << ','
          << fixed(py(c.points[i].median));
    }
    out << "\"/>\n";
    out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << fixed(legend_y) << "\" x2=\""
        << left + plot_w + 36 << "\" y2=\"" << fixed(legend_y) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << fixed(legend_y + 4) << "\">"
        << to_string(c.window) << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  out.flush();
  if (!out) throw Error(ErrorCode::IOFailure, "write to '" + path + "' failed");
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table{
      {"Cusp", 33, 33, 1, 11, X0Rule::Zero, 1.0, SyntheticKind::Cusp},
      {"Ramp", 33, 33, 1, 11, X0Rule::Zero, 1.0, SyntheticKind::Ramp},
      {"Sing", 45, 45, 1, 9, X0Rule::Zero, 1.0, SyntheticKind::Sing},
      {"SI1899", 22938, 20349, 19, 21, X0Rule::AdjointMeasurements, 0.1, std::nullopt},
      {"SI1948", 27680, 27531, 19, 23, X0Rule::AdjointMeasurements, 0.1, std::nullopt},
      {"SI2141", 42800, 41769, 21, 17, X0Rule::AdjointMeasurements, 0.1, std::nullopt},
      {"SX5", 24167, 23205, 17, 13, X0Rule::AdjointMeasurements, 0.1, std::nullopt},
      {"SX224", 25805, 24633, 23, 21, X0Rule::AdjointMeasurements, 0.1, std::nullopt},
      {"SI1716", 25908, 24633, 23, 21, X0Rule::AdjointMeasurements, 1.0, std::nullopt},
  };
  return table;
}

std::optional<Preset> find_preset(std::string_view label) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
  };
  for (const auto& p : presets()) {
    if (lower(p.label) == lower(label)) return p;
  }
  return std::nullopt;
}

}  // namespace sdgf
