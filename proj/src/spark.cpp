#include "sdgf/spark.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SVD>
#include <json.hpp>

namespace sdgf {

Real singular_ratio(const CMatrix& rows) {
  if (rows.rows() == 0) return 1.0;
  if (rows.rows() > rows.cols()) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(rows);
  const auto& s = svd.singularValues();
  const Real largest = s(0);
  if (!(largest > 0.0)) return 0.0;
  return s(s.size() - 1) / largest;
}

namespace {

using RowSource = std::function<CVector(Index)>;

CMatrix gather(const RowSource& row, Index L, const std::vector<Index>& subset) {
  CMatrix out(static_cast<Index>(subset.size()), L);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    out.row(static_cast<Index>(i)) = row(subset[i]).transpose();
  }
  return out;
}

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (Index i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return result;
}

// Advances `c` (strictly increasing, values < n) to the next combination.
bool next_combination(std::vector<Index>& c, Index n) {
  const Index k = static_cast<Index>(c.size());
  Index i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (Index j = i + 1; j < k; ++j) {
    c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

SparkReport witness_search(const RowSource& row, Index P, Index L, std::int64_t trials,
                           Index subset_size, std::uint64_t seed, Real tol) {
  if (subset_size < 1 || subset_size > L || subset_size > P) {
    throw Error(ErrorCode::InvalidArgument, "subset size must lie in [1, min(P, L)]");
  }
  SparkReport report;
  report.frame_size = P;
  report.dimension = L;
  report.rank_tolerance = tol;
  std::mt19937_64 rng(seed);
  std::vector<Index> pool(static_cast<std::size_t>(P));
  for (std::int64_t t = 0; t < trials; ++t) {
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < subset_size; ++i) {
      std::uniform_int_distribution<Index> pick(i, P - 1);
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
    }
    std::vector<Index> subset(pool.begin(), pool.begin() + subset_size);
    std::sort(subset.begin(), subset.end());
    ++report.subsets_tested;
    if (singular_ratio(gather(row, L, subset)) <= tol) {
      report.witness = std::move(subset);
      report.upper_bound = subset_size;
      break;
    }
  }
  return report;
}

}  // namespace

bool verify_witness(const CMatrix& frame, const SparkReport& report) {
  if (report.witness.empty()) return false;
  CMatrix rows(static_cast<Index>(report.witness.size()), frame.cols());
  for (std::size_t i = 0; i < report.witness.size(); ++i) {
    rows.row(static_cast<Index>(i)) = frame.row(report.witness[i]);
  }
  return singular_ratio(rows) <= report.rank_tolerance;
}

SparkReport spark_exhaustive(const CMatrix& frame, Real rank_tolerance) {
  const Index P = frame.rows(), L = frame.cols();
  const Index top = std::min(P, L);
  if (binomial(P, top) > 1e6) {
    throw Error(ErrorCode::TooLarge, "exhaustive spark needs binomial(" + std::to_string(P) +
                                         ", " + std::to_string(top) + ") subsets (limit 1e6)");
  }
  SparkReport report;
  report.frame_size = P;
  report.dimension = L;
  report.exhaustive = true;
  report.rank_tolerance = rank_tolerance;
  const RowSource row = [&](Index j) -> CVector { return frame.row(j).transpose(); };
  for (Index k = 1; k <= top; ++k) {
    std::vector<Index> subset(static_cast<std::size_t>(k));
    std::iota(subset.begin(), subset.end(), Index{0});
    do {
      ++report.subsets_tested;
      if (singular_ratio(gather(row, L, subset)) <= rank_tolerance) {
        report.spark = k;
        report.upper_bound = k;
        report.witness = subset;
        return report;
      }
    } while (next_combination(subset, P));
  }
  report.spark = L + 1;
  return report;
}

SparkReport deficiency_witness_search(const CMatrix& frame, std::int64_t trials,
                                      Index subset_size, std::uint64_t seed, Real rank_tolerance) {
  const RowSource row = [&](Index j) -> CVector { return frame.row(j).transpose(); };
  return witness_search(row, frame.rows(), frame.cols(), trials, subset_size, seed,
                        rank_tolerance);
}

SparkReport deficiency_witness_search(const AnalysisOperator& op, std::int64_t trials,
                                      Index subset_size, std::uint64_t seed, Real rank_tolerance) {
  const RowSource row = [&](Index j) { return frame_row(op, j); };
  return witness_search(row, op.rows(), op.cols(), trials, subset_size, seed, rank_tolerance);
}

std::string SparkReport::to_text() const {
  std::ostringstream out;
  out << "frame size (P): " << frame_size << '\n';
  out << "dimension (L):  " << dimension << '\n';
  out << "search:         " << (exhaustive ? "exhaustive" : "randomized") << ", "
      << subsets_tested << " subsets tested\n";
  out << "rank tolerance: " << rank_tolerance << '\n';
  if (spark) {
    out << "spark:          " << *spark << (*spark == dimension + 1 ? " (full spark)" : " (deficient)")
        << '\n';
  } else if (upper_bound) {
    out << "spark:          <= " << *upper_bound << " (deficient)\n";
  } else {
    out << "spark:          unknown (no witness found, inconclusive)\n";
  }
  if (!witness.empty()) {
    out << "witness:       ";
    for (Index j : witness) out << ' ' << j;
    out << '\n';
  }
  return out.str();
}

std::string SparkReport::to_json() const {
  nlohmann::ordered_json j;
  j["frame_size"] = frame_size;
  j["dimension"] = dimension;
  j["exhaustive"] = exhaustive;
  j["rank_tolerance"] = rank_tolerance;
  j["subsets_tested"] = subsets_tested;
  j["spark"] = spark ? nlohmann::ordered_json(*spark) : nlohmann::ordered_json(nullptr);
  j["upper_bound"] =
      upper_bound ? nlohmann::ordered_json(*upper_bound) : nlohmann::ordered_json(nullptr);
  j["witness"] = witness;
  j["deficient"] = deficient();
  return j.dump(2) + "\n";
}

}  // namespace sdgf
