// Heuristic solver over the run-length encoding of a partition.
//
// A partition of n pre-bins is a bit-vector x with x[i] = 1 when pre-bin i
// closes a bin (x[n-1] = 1 always). The accumulator a counts preceding zeros
// and z the length of the zero run closed at i:
//
//   a[i] = (a[i-1] + 1)(1 - x[i]),   z[i] = a[i-1](1 - x[i-1]) x[i]
//
// with a[-1] = x[-1] = 0, so the bin closed at i spans i - z[i] .. i.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "optbin/aggregate.hpp"
#include "optbin/core.hpp"

namespace optbin {

struct DiagonalEncoding {
    std::vector<int> x;
    std::vector<int> a;
    std::vector<int> z;
    std::vector<Interval> intervals;
};

// Throws MalformedEncoding for an empty vector, non-binary entries or
// x.back() != 1.
DiagonalEncoding decode(const std::vector<int>& x);

// Bin-end bits of a partition of n pre-bins; throws MalformedEncoding if the
// intervals do not partition [0, n).
std::vector<int> encode(const std::vector<Interval>& intervals, int n);

// Entry (i, z) of the backward-computed row i: the interval of length z + 1
// ending at i, i.e. m(i, i - z).
template <typename T>
const T& reversed_value(const TriMatrix<T>& m, int i, int z) {
    return m(i, i - z);
}

// Objective of the decoded partition in the solver's sense, or nullopt when
// it violates any constraint. Trends must be concrete (no Auto).
std::optional<double> ls_objective(const std::vector<int>& x, const AggregateSet& agg,
                                   const BinningConfig& cfg, const PValuePairs& pairs);

struct LsBudget {
    // Neighbourhood scans plus restarts; the search is deterministic for a
    // fixed seed whenever this limit is reached before the time limit.
    std::int64_t iterations = 2000;
    double seconds = 1.0;
};

// Steepest descent over bit flips and boundary shifts with random restarts,
// starting from the all-ones encoding. Status is Feasible, or Infeasible if
// no feasible encoding was met. Auto trends are resolved as in solve().
Solution ls_solve(const AggregateSet& agg, const BinningConfig& cfg, const PValuePairs& pairs,
                  const LsBudget& budget, std::uint64_t seed);

}  // namespace optbin
