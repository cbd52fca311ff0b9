#include "refint/outlier.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "refint/errors.hpp"
#include "refint/stats.hpp"

namespace refint::outlier {

namespace {

std::vector<double> sorted_input(std::span<const double> values, std::size_t min_n,
                                 const char* what) {
  if (values.size() < min_n) {
    throw PreconditionError(std::string(what) + ": need at least " + std::to_string(min_n) +
                            " values");
  }
  std::vector<double> sorted(values.begin(), values.end());
  if (std::any_of(sorted.begin(), sorted.end(), [](double v) { return std::isnan(v); })) {
    throw PreconditionError(std::string(what) + ": NaN in input");
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}


EliminationResult split(Elimination procedure, const std::vector<double>& sorted,
                        std::size_t first, std::size_t last) {
  // Keeps [first, last).
  return EliminationResult(procedure, {sorted.begin() + first, sorted.begin() + last},
                           {sorted.begin(), sorted.begin() + first},
                           {sorted.begin() + last, sorted.end()});
}

}  // namespace

EliminationResult no_elimination(std::span<const double> values) {
  return EliminationResult(Elimination::none, {values.begin(), values.end()}, {}, {});
}

EliminationResult tukey_eliminate(std::span<const double> values, const TukeyOptions& options) {
  const auto sorted = sorted_input(values, 4, "tukey_eliminate");
  TukeyFences f;
  f.q1 = stats::quantile_sorted(sorted, 0.25);
  f.q3 = stats::quantile_sorted(sorted, 0.75);
  f.iqr = f.q3 - f.q1;
  f.lower_fence = f.q1 - options.fence_coefficient * f.iqr;
  f.upper_fence = f.q3 + options.fence_coefficient * f.iqr;

  const auto first = static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), f.lower_fence) - sorted.begin());
  const auto last = static_cast<std::size_t>(
      std::upper_bound(sorted.begin(), sorted.end(), f.upper_fence) - sorted.begin());
  auto result = split(Elimination::tukey, sorted, first, last);
  result.fences = f;
  return result;
}

EliminationResult block_dr_eliminate(std::span<const double> values,
                                     const DixonReedOptions& options) {
  const auto sorted = sorted_input(values, 3, "block_dr_eliminate");
  // Current data is sorted[lo, hi).
  std::size_t lo = 0;
  std::size_t hi = sorted.size();
  std::vector<DixonReedPass> passes;
  std::vector<std::string> flags;

  const double full_range = sorted.back() - sorted.front();
  if (!(full_range > 0.0)) flags.emplace_back("constant_data");

  // Tests one tail of the current data; returns the block size to remove.
  auto test_tail = [&](Tail tail, double range) -> std::size_t {
    if (hi - lo < 3 || !(range > 0.0)) return 0;
    DixonReedPass pass;
    pass.tail = tail;
    pass.range = range;
    if (tail == Tail::high) {
      const double x = sorted[hi - 1];
      std::size_t j = hi - 1;
      while (j > lo && sorted[j - 1] == x) --j;
      if (j == lo) return 0;
      pass.extreme = x;
      pass.gap = x - sorted[j - 1];
      pass.block_size = hi - j;
    } else {
      const double x = sorted[lo];
      std::size_t j = lo + 1;
      while (j < hi && sorted[j] == x) ++j;
      if (j == hi) return 0;
      pass.extreme = x;
      pass.gap = sorted[j] - x;
      pass.block_size = j - lo;
    }
    pass.eliminated = pass.gap / range > options.cutoff;
    // Never remove so much that fewer than one value remains.
    if (pass.eliminated && pass.block_size >= hi - lo) pass.eliminated = false;
    passes.push_back(pass);
    return pass.eliminated ? pass.block_size : 0;
  };

  for (;;) {
    if (hi - lo < 3 || !(sorted[hi - 1] > sorted[lo])) break;
    const std::span<const double> current(sorted.data() + lo, hi - lo);
    const double med = stats::quantile_sorted(current, 0.5);
    const bool high_first = sorted[hi - 1] - med >= med - sorted[lo];
    const Tail order[2] = {high_first ? Tail::high : Tail::low,
                           high_first ? Tail::low : Tail::high};
    bool removed = false;
    for (Tail tail : order) {
      const double range = options.iterate ? sorted[hi - 1] - sorted[lo] : full_range;
      const std::size_t block = test_tail(tail, range);
      if (block == 0) continue;
      removed = true;
      if (tail == Tail::high) {
        hi -= block;
      } else {
        lo += block;
      }
      // Iterative mode recomputes the median and R before the next test.
      if (options.iterate) break;
    }
    if (!options.iterate || !removed) break;
  }

  auto result = split(Elimination::block_dr, sorted, lo, hi);
  result.passes = std::move(passes);
  result.flags = std::move(flags);
  return result;
}

}  // namespace refint::outlier
