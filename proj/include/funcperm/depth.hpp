#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "funcperm/error.hpp"
#include "funcperm/fda_core.hpp"
#include "funcperm/random.hpp"

namespace funcperm {

enum class DepthMethod { FraimanMuniz, Band, ModifiedBand };

inline std::string to_string(DepthMethod m) {
  switch (m) {
    case DepthMethod::FraimanMuniz: return "fm";
    case DepthMethod::Band: return "band";
    case DepthMethod::ModifiedBand: return "modified-band";
  }
  return "?";
}

struct DepthVector {
  std::vector<double> values;
  DepthMethod method = DepthMethod::FraimanMuniz;
  std::size_t order = 0;  // r for band depths, 0 otherwise
  bool exact = true;      // false when band combinations were sampled
};

/// Combination budget above which band depths switch to sampling.
inline constexpr std::uint64_t kMaxExactBands = 1'000'000;

/// Key used to break ties between equal values at grid index `l`: sorting by
/// (value, key) is a seeded random shuffle among ties. Keys depend on the
/// position of the curve in the sample it is ranked in.
inline std::uint64_t tie_key(std::uint64_t seed, std::size_t l, std::size_t i) noexcept {
  return mix_seed(seed, l, i);
}

/// Depth of rank j (1-based) among n values, scaled by 2n so it is an integer:
/// 2n * (1/2 - |1/2 - (j/n - 1/(2n))|) = min(2j - 1, 2n - 2j + 1).
constexpr std::uint32_t scaled_rank_depth(std::size_t rank, std::size_t n) noexcept {
  const std::size_t a = 2 * rank - 1;
  const std::size_t b = 2 * n - a;
  return static_cast<std::uint32_t>(a < b ? a : b);
}

namespace detail {

struct Keyed {
  double value;
  std::uint64_t key;
  std::uint32_t index;
  bool operator<(const Keyed& o) const noexcept {
    if (value != o.value) return value < o.value;
    if (key != o.key) return key < o.key;
    return index < o.index;
  }
};

/// ranks[i] = 1-based rank of item i when sorted by (value, tie key).
inline void rank_column(std::vector<Keyed>& scratch, std::span<std::uint32_t> ranks) {
  std::sort(scratch.begin(), scratch.end());
  for (std::size_t pos = 0; pos < scratch.size(); ++pos)
    ranks[scratch[pos].index] = static_cast<std::uint32_t>(pos + 1);
}

inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t num = n - r + i;
    if (c > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    c = c * num / i;
  }
  return c;
}

}  // namespace detail

/// Rank-based depth of each value among all of them; ties broken by `tie_seed`.
inline std::vector<double> univariate_depth(std::span<const double> values, std::uint64_t tie_seed) {
  const std::size_t n = values.size();
  if (n == 0) throw DomainError("univariate depth of an empty sample");
  std::vector<detail::Keyed> scratch(n);
  for (std::size_t i = 0; i < n; ++i)
    scratch[i] = {values[i], tie_key(tie_seed, 0, i), static_cast<std::uint32_t>(i)};
  std::vector<std::uint32_t> ranks(n);
  detail::rank_column(scratch, ranks);
  std::vector<double> depth(n);
  for (std::size_t i = 0; i < n; ++i)
    depth[i] = static_cast<double>(scaled_rank_depth(ranks[i], n)) / static_cast<double>(2 * n);
  return depth;
}

/// Fraiman-Muniz depth: pointwise rank depth integrated over the grid with
/// normalized trapezoidal weights. Every value lies in (0, 1/2].
inline DepthVector fm_depths(const FunctionalSample& sample, std::uint64_t tie_seed) {
  const std::size_t n = sample.count();
  const std::size_t points = sample.points();
  const auto weights = normalized_trapezoid_weights(sample.grid());
  std::vector<double> acc(n, 0.0);
  std::vector<detail::Keyed> scratch(n);
  std::vector<std::uint32_t> ranks(n);
  for (std::size_t l = 0; l < points; ++l) {
    for (std::size_t i = 0; i < n; ++i)
      scratch[i] = {sample(i, l), tie_key(tie_seed, l, i), static_cast<std::uint32_t>(i)};
    detail::rank_column(scratch, ranks);
    for (std::size_t i = 0; i < n; ++i)
      acc[i] += weights[l] * static_cast<double>(scaled_rank_depth(ranks[i], n));
  }
  DepthVector out;
  out.method = DepthMethod::FraimanMuniz;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = acc[i] / static_cast<double>(2 * n);
  return out;
}

/// FM depth of `candidate` within reference ∪ {candidate}, the candidate
/// taking the last position of the augmented sample.
inline double fm_depth_of(std::span<const double> candidate, const FunctionalSample& reference,
                          std::uint64_t tie_seed) {
  if (candidate.size() != reference.points())
    throw DimensionError("candidate curve length differs from the reference grid");
  std::vector<double> values(reference.values().begin(), reference.values().end());
  values.insert(values.end(), candidate.begin(), candidate.end());
  const FunctionalSample augmented(reference.grid_ptr(), std::move(values));
  return fm_depths(augmented, tie_seed).values.back();
}

namespace detail {

inline void check_band_order(std::size_t n, std::size_t r) {
  if (r < 2 || r > n)
    throw DomainError("band order r=" + std::to_string(r) + " must lie in [2, " +
                      std::to_string(n) + "]");
}

/// Shared driver for both band depths. For each band (a set of r curves) it
/// adds, for every curve u, either the all-times indicator (plain) or the
/// weighted time fraction (modified) of u lying inside the band.
inline DepthVector band_depth_impl(const FunctionalSample& sample, std::size_t r, bool modified,
                                   std::uint64_t seed) {
  const std::size_t n = sample.count();
  check_band_order(n, r);
  const std::size_t points = sample.points();
  const auto weights = normalized_trapezoid_weights(sample.grid());
  const std::uint64_t total = binomial_saturating(n, r);
  const bool exact = total <= kMaxExactBands;
  const std::uint64_t bands = exact ? total : kMaxExactBands;

  std::vector<double> acc(n, 0.0);
  std::vector<double> lo(points), hi(points);
  std::vector<std::size_t> combo(r);
  std::iota(combo.begin(), combo.end(), std::size_t{0});
  Engine rng = make_stream(mix_seed(seed, 0xBA2D));

  auto visit = [&] {
    for (std::size_t l = 0; l < points; ++l) {
      double a = sample(combo[0], l), b = a;
      for (std::size_t q = 1; q < r; ++q) {
        const double v = sample(combo[q], l);
        a = std::min(a, v);
        b = std::max(b, v);
      }
      lo[l] = a;
      hi[l] = b;
    }
    for (std::size_t u = 0; u < n; ++u) {
      const auto row = sample.row(u);
      if (modified) {
        double inside = 0.0;
        for (std::size_t l = 0; l < points; ++l)
          if (lo[l] <= row[l] && row[l] <= hi[l]) inside += weights[l];
        acc[u] += inside;
      } else {
        bool contained = true;
        for (std::size_t l = 0; l < points && contained; ++l)
          contained = lo[l] <= row[l] && row[l] <= hi[l];
        if (contained) acc[u] += 1.0;
      }
    }
  };

  if (exact) {
    for (;;) {
      visit();
      // next combination in lexicographic order
      std::size_t q = r;
      while (q > 0 && combo[q - 1] == n - r + q - 1) --q;
      if (q == 0) break;
      ++combo[q - 1];
      for (std::size_t p = q; p < r; ++p) combo[p] = combo[p - 1] + 1;
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::uint64_t b = 0; b < bands; ++b) {
      for (std::size_t q = 0; q < r; ++q) {
        std::size_t c;
        do {
          c = pick(rng);
        } while (std::find(combo.begin(), combo.begin() + q, c) != combo.begin() + q);
        combo[q] = c;
      }
      visit();
    }
  }

  DepthVector out;
  out.method = modified ? DepthMethod::ModifiedBand : DepthMethod::Band;
  out.order = r;
  out.exact = exact;
  out.values.resize(n);
  for (std::size_t u = 0; u < n; ++u) out.values[u] = acc[u] / static_cast<double>(bands);
  return out;
}

}  // namespace detail

/// Fraction of r-curve bands that contain the whole graph of each curve.
/// Enumerates all C(n, r) bands up to kMaxExactBands, otherwise samples that
/// many bands with `sampling_seed` (reported through DepthVector::exact).
inline DepthVector band_depth(const FunctionalSample& sample, std::size_t r = 2,
                              std::uint64_t sampling_seed = 0) {
  return detail::band_depth_impl(sample, r, false, sampling_seed);
}

/// Band depth with the containment indicator replaced by the weighted fraction
/// of grid time the curve spends inside the band.
inline DepthVector modified_band_depth(const FunctionalSample& sample, std::size_t r = 2,
                                       std::uint64_t sampling_seed = 0) {
  return detail::band_depth_impl(sample, r, true, sampling_seed);
}

}  // namespace funcperm
