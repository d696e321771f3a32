#ifndef SDGF_SPARK_HPP
#define SDGF_SPARK_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdgf/gabor.hpp"
#include "sdgf/types.hpp"

namespace sdgf {

// Spark = size of the smallest linearly dependent subset of the frame rows.
// A subset is dependent when its smallest singular value is at most
// rank_tolerance times its largest one.
struct SparkReport {
  Index frame_size = 0;  // P
  Index dimension = 0;   // L
  // Exact spark; only set by an exhaustive run. L + 1 means no dependent
  // subset of size <= L exists.
  std::optional<Index> spark;
  // Set whenever a witness is known: spark <= *upper_bound.
  std::optional<Index> upper_bound;
  std::vector<Index> witness;
  bool exhaustive = false;
  Real rank_tolerance = 1e-9;
  std::int64_t subsets_tested = 0;

  bool deficient() const { return upper_bound && *upper_bound <= dimension; }

  std::string to_text() const;
  std::string to_json() const;
};

inline constexpr Real kDefaultRankTolerance = 1e-9;

// sigma_min / sigma_max of the selected rows (0 for an all-zero selection).
Real singular_ratio(const CMatrix& rows);

// True when `witness` re-verifies against `frame` at the report's tolerance.
bool verify_witness(const CMatrix& frame, const SparkReport& report);

// Enumerates subsets by increasing size. Throws TooLarge when
// binomial(P, min(P, L)) exceeds 1e6.
SparkReport spark_exhaustive(const CMatrix& frame, Real rank_tolerance = kDefaultRankTolerance);

// Random subsets of one size. A hit proves spark <= subset_size; a miss is
// inconclusive (spark stays unset).
SparkReport deficiency_witness_search(const CMatrix& frame, std::int64_t trials,
                                      Index subset_size, std::uint64_t seed,
                                      Real rank_tolerance = kDefaultRankTolerance);
// Same search, building frame rows on demand from the operator.
SparkReport deficiency_witness_search(const AnalysisOperator& op, std::int64_t trials,
                                      Index subset_size, std::uint64_t seed,
                                      Real rank_tolerance = kDefaultRankTolerance);

}  // namespace sdgf

#endif  // SDGF_SPARK_HPP
