#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "funcperm/meta_test.hpp"

using namespace funcperm;
using Catch::Approx;

namespace {

PooledSample gaussian_pool(std::size_t m, std::size_t n, double y_scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto g = Grid::uniform(0.0, 1.0, 15);
  std::vector<double> x(m * 15), y(n * 15);
  for (double& v : x) v = normal(rng);
  for (double& v : y) v = y_scale * normal(rng);
  return PooledSample::pool(FunctionalSample(g, x), FunctionalSample(g, y));
}

}  // namespace

TEST_CASE("meta statistics take one p-value per curve", "[meta]") {
  const auto pooled = gaussian_pool(8, 6, 1.0, 1);
  const auto s = meta_statistics(pooled, 3);
  CHECK(s.p.size() == 8);
  CHECK(s.q.size() == 6);
  for (double v : s.p) {
    CHECK(v >= 1.0 / 7);
    CHECK(v <= 1.0);
  }
  for (double v : s.q) {
    CHECK(v >= 1.0 / 9);
    CHECK(v <= 1.0);
  }
  CHECK(s.s == std::max(s.s_x, s.s_y));
  CHECK(s.s_x == Approx(meta_statistic(s.p)));

  const auto only_x = meta_statistics(pooled, 3, MetaSide::X);
  CHECK(only_x.p == s.p);
  CHECK(only_x.q.empty());
  CHECK(only_x.s_y == 0.0);
}

TEST_CASE("combined min p-value", "[meta]") {
  CHECK(combine_min_pvalues(0.01, 0.5) == 0.02);
  CHECK(combine_min_pvalues(0.7, 0.9) == 1.0);
}

TEST_CASE("meta tests need two curves per group", "[meta]") {
  const auto g = Grid({0.0, 1.0});
  const auto pooled = PooledSample::pool(FunctionalSample::from_rows(g, {{0, 0}}),
                                         FunctionalSample::from_rows(g, {{1, 1}, {2, 2}}));
  PermutationConfig c;
  c.B = 10;
  CHECK_THROWS_AS(ma1_test(pooled, c, 0), DomainError);
  CHECK_THROWS_AS(ma2_test(pooled, c, 0), DomainError);
}

TEST_CASE("MA1 and MA2 detect a volatility shift", "[meta]") {
  const auto pooled = gaussian_pool(20, 20, 4.0, 2);
  PermutationConfig c;
  c.B = 99;
  const auto ma1 = ma1_test(pooled, c, 5);
  const auto ma2 = ma2_test(pooled, c, 5);
  CHECK(ma1.p_value <= 0.02);
  CHECK(ma2.p_value <= 0.04);
  CHECK(ma2.p_value == combine_min_pvalues(ma2.details.at("p_x"), ma2.details.at("p_y")));
  CHECK(ma1.statistic == ma2.statistic);
}

TEST_CASE("meta tests are deterministic across thread counts", "[meta][determinism]") {
  const auto pooled = gaussian_pool(10, 9, 1.0, 3);
  PermutationConfig c;
  c.B = 60;
  c.seed = 123;
  const auto a1 = ma1_test(pooled, c, 7);
  const auto a2 = ma2_test(pooled, c, 7);
  c.threads = 3;
  const auto b1 = ma1_test(pooled, c, 7);
  const auto b2 = ma2_test(pooled, c, 7);
  CHECK(a1.p_value == b1.p_value);
  CHECK(a1.details == b1.details);
  CHECK(a2.p_value == b2.p_value);
  CHECK(a2.details == b2.details);
}

TEST_CASE("MA2 passes use disjoint streams", "[meta]") {
  CHECK(ma2_pass_seed(1, MetaSide::X) != ma2_pass_seed(1, MetaSide::Y));
  CHECK(ma2_pass_seed(1, MetaSide::X) != 1);
}
