#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "../brute_force.hpp"
#include "ert/adversary.hpp"
#include "ert/distance_oracles.hpp"
#include "ert/errors.hpp"
#include "ert/transforms.hpp"

using namespace ert;

namespace {

ErasedFunction reals(const std::vector<double>& v) {
  return ErasedFunction::from_reals(Domain::line(v.size()), v);
}

// Random function on `dom` with up to max_n nonerased points.
ErasedFunction random_instance(Rng& rng, const Domain& dom, std::uint32_t max_n,
                               int range, ValueKind kind = ValueKind::Real) {
  std::vector<double> v(dom.size());
  for (double& x : v) x = static_cast<double>(rng.uniform_below(range));
  auto f = make_total(dom, v, kind);
  const std::uint64_t keep = 1 + rng.uniform_below(std::min<std::uint64_t>(max_n, dom.size()));
  return erase_random(f, static_cast<double>(dom.size() - keep) / dom.size(), rng);
}

StepBounds random_bounds(Rng& rng, std::uint64_t n) {
  std::vector<double> lo, hi;
  for (std::uint64_t t = 0; t + 1 < n; ++t) {
    const double l = static_cast<double>(rng.uniform_below(5)) - 3.0;
    lo.push_back(rng.uniform_below(7) == 0 ? -kInf : l);
    hi.push_back(rng.uniform_below(7) == 0
                     ? kInf
                     : l + 1 + static_cast<double>(rng.uniform_below(3)));
  }
  return StepBounds(lo, hi);
}

void expect_valid(const ErasedFunction& f, const Property& p,
                  const DistanceReport& r) {
  std::string why;
  EXPECT_TRUE(validate_report(f, p, r, &why)) << why;
}

}  // namespace

TEST(MonotoneLineOracle, Examples) {
  EXPECT_EQ(distance_to_monotone_line(reals({1, 2, 2, 5})).absolute, 0U);
  EXPECT_EQ(distance_to_monotone_line(reals({5, 4, 3, 2, 1})).absolute, 4U);
  const auto f = reals({1, 3, 2, 4});
  const auto r = distance_to_monotone_line(f);
  EXPECT_EQ(r.absolute, 1U);
  EXPECT_EQ(r.absolute, brute::monotone_line(f));
  EXPECT_EQ(r.relative, Rational(1, 4));
  expect_valid(f, Property::monotone_line(), r);
}

TEST(MonotoneLineOracle, MatchesBruteForce) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_instance(rng, Domain::line(4 + rng.uniform_below(14)), 14, 5);
    const auto r = distance_to_monotone_line(f);
    ASSERT_EQ(r.absolute, brute::monotone_line(f));
    expect_valid(f, Property::monotone_line(), r);
  }
}

TEST(BdpLineOracle, Examples) {
  const auto lip = StepBounds::lipschitz(4, 1.0);
  const auto f = reals({0, 10, 0, 10});
  EXPECT_EQ(distance_to_bdp_line(f, lip).absolute, 2U);
  EXPECT_EQ(brute::bdp_line(f, lip), 2U);
  EXPECT_EQ(distance_to_bdp_line(reals({0, 1, 0, 1}), lip).absolute, 0U);
}

TEST(BdpLineOracle, MonotoneBoundsAgreeWithLis) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_instance(rng, Domain::line(2 + rng.uniform_below(30)), 30, 6);
    const auto b = StepBounds::monotone(f.domain().side());
    ASSERT_EQ(distance_to_bdp_line(f, b).absolute,
              distance_to_monotone_line(f).absolute);
  }
}

TEST(BdpLineOracle, MatchesBruteForce) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = 2 + rng.uniform_below(16);
    const auto f = random_instance(rng, Domain::line(n), 14, 8);
    const auto b = random_bounds(rng, n);
    const auto r = distance_to_bdp_line(f, b);
    ASSERT_EQ(r.absolute, brute::bdp_line(f, b)) << "instance " << i;
    expect_valid(f, Property::bdp_line(b), r);
  }
}

TEST(ConvexOracle, Examples) {
  EXPECT_EQ(distance_to_convex_line(reals({0, 1, 4, 9, 16})).absolute, 0U);
  const auto f = reals({0, 3, 4});
  const auto r = distance_to_convex_line(f);
  EXPECT_EQ(r.absolute, 1U);
  EXPECT_EQ(r.kept.size(), 2U);
  expect_valid(f, Property::convex_line(), r);
}

TEST(ConvexOracle, MatchesBruteForce) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_instance(rng, Domain::line(3 + rng.uniform_below(15)), 14, 6);
    const auto r = distance_to_convex_line(f);
    ASSERT_EQ(r.absolute, brute::convex_line(f)) << "instance " << i;
    expect_valid(f, Property::convex_line(), r);
  }
}

TEST(ConvexOracle, SizeGate) {
  const auto f = reals(std::vector<double>(1025, 0.0));
  EXPECT_THROW(distance_to_convex_line(f), SizeLimit);
}

TEST(KRunsOracle, Examples) {
  const auto zeros = make_total(Domain::line(9), std::vector<double>(9, 1.0),
                                ValueKind::Bit);
  EXPECT_EQ(distance_to_k_runs(zeros, 1).absolute, 0U);
  const auto alt = make_total(Domain::line(8), {0, 1, 0, 1, 0, 1, 0, 1},
                              ValueKind::Bit);
  EXPECT_EQ(distance_to_k_runs(alt, 2).absolute, 3U);
  EXPECT_EQ(brute::k_runs(alt, 2), 3U);
}

TEST(KRunsOracle, MatchesBruteForce) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto f = random_instance(rng, Domain::line(2 + rng.uniform_below(14)),
                                   12, 2, ValueKind::Bit);
    const auto k = static_cast<std::uint32_t>(1 + rng.uniform_below(4));
    const auto r = distance_to_k_runs(f, k);
    ASSERT_EQ(r.absolute, brute::k_runs(f, k));
    expect_valid(f, Property::k_runs(k), r);
  }
}

TEST(LowDegreeOracle, Examples) {
  std::vector<double> sq(17), lin(17), shifted(17);
  for (int x = 0; x < 17; ++x) {
    sq[x] = (x * x) % 17;
    lin[x] = (3 * x + 2) % 17;
    shifted[x] = ((x + 5) * (x + 5)) % 17;
  }
  const auto f = make_total(Domain::line(17), sq, ValueKind::Field, 17);
  const auto r = distance_to_low_degree(f, 1);
  EXPECT_EQ(r.absolute, 15U);
  EXPECT_EQ(r.relative, Rational(15, 17));
  expect_valid(f, Property::low_degree(1), r);
  EXPECT_EQ(distance_to_low_degree(
                make_total(Domain::line(17), lin, ValueKind::Field, 17), 1)
                .absolute,
            0U);
  EXPECT_EQ(distance_to_low_degree(
                make_total(Domain::line(17), shifted, ValueKind::Field, 17), 1)
                .absolute,
            15U);
  EXPECT_EQ(distance_to_low_degree(f, 2).absolute, 0U);
}

TEST(LowDegreeOracle, SizeGate) {
  const auto f = make_total(Domain::line(67), std::vector<double>(67, 0.0),
                            ValueKind::Field, 67);
  EXPECT_THROW(distance_to_low_degree(f, 1), SizeLimit);
}

TEST(GridOracles, NegatedSumOn3x3) {
  const Domain dom(3, 2);
  std::vector<double> v(9);
  for (Index i = 0; i < 9; ++i) v[i] = -static_cast<double>(dom.coord(i, 0) + dom.coord(i, 1));
  const auto f = ErasedFunction::from_reals(dom, v);
  const auto small = distance_to_monotone_grid_small(f);
  const auto b = BoundingFamily::monotone(3, 2);
  EXPECT_EQ(small.absolute, brute::bdp_grid(f, b));
  EXPECT_EQ(distance_to_monotone_grid(f).absolute, small.absolute);
  expect_valid(f, Property::monotone_grid(), small);
}

TEST(GridOracles, RoutesAgreeWithBruteForce) {
  Rng rng(6);
  for (int i = 0; i < 400; ++i) {
    const Domain dom = i % 2 ? Domain(3, 2) : Domain(2, 3);
    const auto f = random_instance(rng, dom, 9, 4);
    const auto b = i % 3 ? BoundingFamily::monotone(dom.side(), dom.dims())
                         : BoundingFamily::lipschitz(dom.side(), dom.dims(), 1.0);
    const Property p = i % 3 ? Property::monotone_grid() : Property::bdp_grid(b);
    const auto exact = distance(f, p);
    const auto small = i % 3 ? distance_to_monotone_grid_small(f)
                             : distance_to_bdp_grid_small(f, b);
    const auto truth = brute::bdp_grid(f, b);
    ASSERT_EQ(exact.absolute, truth);
    ASSERT_EQ(small.absolute, truth);
    expect_valid(f, p, exact);
    expect_valid(f, p, small);
    ASSERT_TRUE(small.matching_lower_bound.has_value());
    EXPECT_LE(*small.matching_lower_bound, truth);
    EXPECT_LE(truth, 2 * *small.matching_lower_bound);
  }
}

TEST(GridOracles, SmallRouteGate) {
  const Domain dom(5, 2);
  const auto f = ErasedFunction::from_reals(dom, std::vector<double>(25, 0.0));
  EXPECT_THROW(distance_to_monotone_grid_small(f), SizeLimit);
  EXPECT_EQ(distance_to_monotone_grid(f).absolute, 0U);
}

TEST(GridOracles, MiddleLayerIsHalfFar) {
  const auto f = hypercube_middle_layer(4);
  const auto r = distance_to_monotone_grid_small(f);
  EXPECT_EQ(r.relative, Rational(1, 2));
  EXPECT_EQ(distance_to_monotone_grid(f).relative, Rational(1, 2));
  EXPECT_FALSE(is_restorable(f, Property::monotone_grid()));
}

TEST(GraphHelpers, AntichainAndCover) {
  // Chain 0 < 1 < 2 (transitively closed) plus isolated 3.
  const OrderEdges edges{{0, 1}, {1, 2}, {0, 2}};
  const auto a = maximum_antichain(4, edges);
  EXPECT_EQ(a.matching, 2U);
  EXPECT_EQ(a.antichain.size(), 2U);
  EXPECT_EQ(minimum_vertex_cover_small(4, edges).size(), 2U);
  EXPECT_LE(greedy_matching_size(4, edges), 2U);
  EXPECT_GE(greedy_matching_size(4, edges), 1U);
}

TEST(PosetOracle, StarForestTemplate) {
  const auto poset = std::make_shared<const Poset>(Poset::star_forest(16, 3));
  std::vector<double> v(64);
  for (std::uint32_t x = 0; x < 64; ++x) {
    int down = 0;
    for (std::uint32_t y = 0; y < 64; ++y) down += poset->precedes(y, x) ? 1 : 0;
    v[x] = -down;
  }
  const auto f = make_total(Domain::line(64), v);
  const Property p = Property::poset_monotone(poset);
  const auto r = distance(f, p);
  EXPECT_EQ(r.relative, Rational(1, 4));
  expect_valid(f, p, r);
}

TEST(Restorable, Examples) {
  std::vector<PointValue> v(10, PointValue::erased());
  v[2] = PointValue::real(2);
  v[6] = PointValue::real(1);
  EXPECT_FALSE(is_restorable(ErasedFunction(Domain::line(10), v),
                             Property::monotone_line()));
  v[6] = PointValue::real(5);
  EXPECT_TRUE(is_restorable(ErasedFunction(Domain::line(10), v),
                            Property::monotone_line()));
}

TEST(Reports, RandomReportsRevalidate) {
  // 10^4 reports across the line properties.
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t n = 2 + rng.uniform_below(40);
    const int which = i % 4;
    if (which == 3) {
      const auto f = random_instance(rng, Domain::line(n), 40, 2, ValueKind::Bit);
      const Property p = Property::k_runs(1 + i % 3);
      expect_valid(f, p, distance(f, p));
      continue;
    }
    const auto f = random_instance(rng, Domain::line(n), 40, 9);
    const Property p = which == 0   ? Property::monotone_line()
                       : which == 1 ? Property::bdp_line(random_bounds(rng, n))
                                    : Property::convex_line();
    const auto r = distance(f, p);
    std::string why;
    ASSERT_TRUE(validate_report(f, p, r, &why)) << why;
  }
}

TEST(Reports, TamperedReportsFail) {
  const auto f = reals({3, 1, 2, 0, 5});
  auto r = distance_to_monotone_line(f);
  ASSERT_TRUE(validate_report(f, Property::monotone_line(), r));
  auto wrong_size = r;
  wrong_size.absolute += 1;
  EXPECT_FALSE(validate_report(f, Property::monotone_line(), wrong_size));
  auto bad_kept = r;
  bad_kept.kept = {0, 1, 2};
  EXPECT_FALSE(validate_report(f, Property::monotone_line(), bad_kept));
}

TEST(Certificates, Validation) {
  const auto f = reals({0, 3, 4, 1});
  const Property mono = Property::monotone_line();
  EXPECT_TRUE(validate_certificate(f, mono, {Certificate::Kind::ViolatedPair, {1, 3}}));
  EXPECT_FALSE(validate_certificate(f, mono, {Certificate::Kind::ViolatedPair, {0, 1}}));
  EXPECT_FALSE(validate_certificate(f, mono, {Certificate::Kind::None, {}}));
  const Property convex = Property::convex_line();
  EXPECT_TRUE(validate_certificate(f, convex, {Certificate::Kind::SlopeChain, {0, 1, 1, 2}}));
  EXPECT_FALSE(validate_certificate(f, convex, {Certificate::Kind::SlopeChain, {1, 2, 0, 1}}));
}
