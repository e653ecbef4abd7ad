// Simulates one reference sample and three shifted samples, then runs every
// test of the library on each pair.
#include <cstdio>

#include "funcperm/funcperm.hpp"

int main() {
  using namespace funcperm;
  const GbmParams reference;
  GbmParams drift = reference, vol = reference, origin = reference;
  drift.r = 2.0;
  vol.sigma = 2.0;
  origin.x0 = 2.0;

  const std::vector<TestSpec> roster{{"Wilcoxon", Method::Wilcoxon, 10, 4, 199},
                                     {"MA1", Method::MA1, 10, 4, 199},
                                     {"MA2", Method::MA2, 10, 4, 199},
                                     {"Schilling10", Method::Schilling, 10, 4, 199},
                                     {"HK", Method::HK, 10, 4, 199}};
  const auto xs = simulate_gbm(reference, 60, 1);
  std::printf("%-8s", "sample");
  for (const auto& t : roster) std::printf("%13s", t.name.c_str());
  std::printf("\n");
  for (const auto& [name, params] : {std::pair{"X", reference}, {"Yr2.00", drift}, {"Ys2.00", vol}, {"Yx2.00", origin}}) {
    const auto pooled = PooledSample::pool(xs, simulate_gbm(params, 50, mix_seed_tag(1, name)));
    std::printf("%-8s", name);
    for (const auto& t : roster) std::printf("%13.4g", run_test(t, pooled, 7, 7, 0).p_value);
    std::printf("\n");
  }
}
