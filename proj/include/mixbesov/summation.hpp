#ifndef MIXBESOV_SUMMATION_HPP
#define MIXBESOV_SUMMATION_HPP

#include <cstddef>
#include <span>

namespace mixbesov {

// Fixed-shape pairwise summation. The split points depend only on the length,
// so the result is reproducible bit-for-bit for a given input sequence.
inline double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace mixbesov

#endif  // MIXBESOV_SUMMATION_HPP
