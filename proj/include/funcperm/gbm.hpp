#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "funcperm/error.hpp"
#include "funcperm/fda_core.hpp"
#include "funcperm/random.hpp"

namespace funcperm {

/// f(t) = x0 exp(r t - t sigma^2 / 2 + sigma B_t) on a uniform grid over [0, t_max].
struct GbmParams {
  double x0 = 1.0;
  double r = 1.0;
  double sigma = 1.0;
  double t_max = 2.0;
  std::size_t grid_points = 101;

  void validate() const {
    if (!std::isfinite(x0)) throw ConfigError("x0 must be finite", "x0");
    if (!std::isfinite(r)) throw ConfigError("r must be finite", "r");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0", "sigma");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be > 0", "t_max");
    if (grid_points < 2) throw ConfigError("grid_points must be >= 2", "grid_points");
  }

  Grid grid() const { return Grid::uniform(0.0, t_max, grid_points); }

  bool operator==(const GbmParams&) const = default;
};

/// `count` independent paths by exact log-normal stepping: the log increment
/// over Δ is (r - sigma^2/2) Δ + sigma sqrt(Δ) ξ with ξ standard normal.
/// Path i draws from its own stream mix_seed(seed, i); f(t_0) = x0 exactly.
inline FunctionalSample simulate_gbm(const GbmParams& params, std::size_t count, std::uint64_t seed,
                                     unsigned threads = 1) {
  params.validate();
  if (count == 0) throw DomainError("count must be at least 1");
  auto grid = std::make_shared<const Grid>(params.grid());
  const std::size_t L = grid->size();
  std::vector<double> drift(L, 0.0), vol(L, 0.0);
  for (std::size_t l = 1; l < L; ++l) {
    const double dt = (*grid)[l] - (*grid)[l - 1];
    drift[l] = (params.r - 0.5 * params.sigma * params.sigma) * dt;
    vol[l] = params.sigma * std::sqrt(dt);
  }
  std::vector<double> values(count * L);
  parallel_for(count, threads, [&](std::size_t i) {
    Engine rng = make_stream(mix_seed(seed, i));
    std::normal_distribution<double> normal(0.0, 1.0);
    double* row = values.data() + i * L;
    row[0] = params.x0;
    double log_growth = 0.0;
    for (std::size_t l = 1; l < L; ++l) {
      log_growth += drift[l] + vol[l] * normal(rng);
      row[l] = params.x0 * std::exp(log_growth);
    }
  });
  return FunctionalSample(std::move(grid), std::move(values));
}

}  // namespace funcperm
