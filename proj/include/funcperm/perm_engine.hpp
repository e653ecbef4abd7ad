#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "funcperm/error.hpp"
#include "funcperm/fda_core.hpp"
#include "funcperm/random.hpp"

namespace funcperm {

inline constexpr std::uint64_t kDefaultSeed = 20160229;

enum class Alternative {
  Greater,   // large statistics are significant
  TwoSided,  // 2 * smaller tail, capped at 1
};

struct PermutationConfig {
  std::size_t B = 1000;
  std::uint64_t seed = kDefaultSeed;
  Alternative alternative = Alternative::Greater;
  unsigned threads = 1;  // 0 = hardware concurrency

  void validate() const {
    if (B == 0) throw ConfigError("number of resampling iterations B must be at least 1", "B");
  }
};

struct PValue {
  double value = 1.0;
  std::size_t B = 0;
  std::size_t exceed = 0;  // permuted values at least as extreme as the observed one
};

struct PermutationRun {
  double observed = 0.0;
  std::vector<double> permuted;  // indexed by iteration
  PValue p;
};

/// Add-one estimator (1 + #{permuted >= observed}) / (B + 1); ties count as
/// exceedances, so the value is never below 1/(B+1).
inline PValue empirical_pvalue(double observed, std::span<const double> permuted,
                               Alternative alternative = Alternative::Greater) {
  const std::size_t B = permuted.size();
  if (B == 0) throw ConfigError("empirical p-value needs at least one permuted value", "B");
  std::size_t upper = 0, lower = 0;
  for (double v : permuted) {
    if (v >= observed) ++upper;
    if (v <= observed) ++lower;
  }
  const double denom = static_cast<double>(B + 1);
  PValue p;
  p.B = B;
  if (alternative == Alternative::Greater) {
    p.exceed = upper;
    p.value = static_cast<double>(1 + upper) / denom;
  } else {
    p.exceed = std::min(upper, lower);
    p.value = std::min(1.0, 2.0 * static_cast<double>(1 + p.exceed) / denom);
  }
  return p;
}

/// Seed of the independent stream used by resampling iteration `iteration`.
inline std::uint64_t iteration_seed(std::uint64_t seed, std::size_t iteration) noexcept {
  return mix_seed(seed, iteration);
}

/// Generic resampling loop: iteration i calls draw(i, rng) with rng seeded
/// from (config.seed, i), so results do not depend on scheduling or thread
/// count. `draw` must be safe to call concurrently.
template <typename Draw>
PermutationRun resample(double observed, const PermutationConfig& config, Draw&& draw) {
  config.validate();
  PermutationRun run;
  run.observed = observed;
  run.permuted.assign(config.B, 0.0);
  parallel_for(config.B, config.threads, [&](std::size_t i) {
    Engine rng = make_stream(iteration_seed(config.seed, i));
    run.permuted[i] = draw(i, rng);
  });
  run.p = empirical_pvalue(observed, run.permuted, config.alternative);
  return run;
}

/// Uniformly random split of N rows into m X-labels and N-m Y-labels: row i
/// is labeled X iff perm(i) < m for a uniform random permutation.
inline std::vector<Group> random_labels(std::size_t N, std::size_t m, Engine& rng) {
  const auto perm = random_permutation(N, rng);
  std::vector<Group> labels(N);
  for (std::size_t i = 0; i < N; ++i) labels[i] = perm[i] < m ? Group::X : Group::Y;
  return labels;
}

using Statistic = std::function<double(const PooledSample&)>;

/// Permutation p-value of `statistic`: evaluated on the observed labeling,
/// then on B independent random relabelings that keep the group sizes.
template <typename Stat>
PermutationRun permutation_pvalue(const PooledSample& pooled, Stat&& statistic,
                                  const PermutationConfig& config) {
  config.validate();
  const double observed = statistic(pooled);
  return resample(observed, config, [&](std::size_t, Engine& rng) {
    return statistic(pooled.relabeled(random_labels(pooled.size(), pooled.m(), rng)));
  });
}

}  // namespace funcperm
