#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "../brute_force.hpp"
#include "ert/adversary.hpp"
#include "ert/distance_oracles.hpp"
#include "ert/errors.hpp"
#include "ert/line_testers.hpp"
#include "ert/numeric.hpp"

using namespace ert;

namespace {

ErasedFunction reals(const std::vector<double>& v) {
  return ErasedFunction::from_reals(Domain::line(v.size()), v);
}

// Random Line function with erasures and small integer values.
ErasedFunction random_line(Rng& rng, std::uint64_t n, std::uint32_t erase,
                           int range) {
  std::vector<PointValue> v;
  for (std::uint64_t i = 0; i < n; ++i) {
    v.push_back(PointValue::real(static_cast<double>(rng.uniform_below(range))));
  }
  for (std::uint32_t e = 0; e < erase; ++e) {
    v[rng.uniform_below(n)] = PointValue::erased();
  }
  bool any = false;
  for (auto& p : v) any = any || !p.is_erased();
  if (!any) v[0] = PointValue::real(0.0);
  return ErasedFunction(Domain::line(n), v);
}

std::uint64_t rejections(const std::function<Verdict(QueryOracle&, Rng&)>& run,
                         const ErasedFunction& f, const Property& property,
                         int trials, std::uint64_t seed,
                         std::uint64_t budget_cap = 0) {
  std::uint64_t rejected = 0;
  const Rng master(seed);
  for (int t = 0; t < trials; ++t) {
    Rng rng = master.split(t);
    QueryOracle oracle(f);
    const Verdict v = run(oracle, rng);
    if (budget_cap) EXPECT_LE(v.queries_used, budget_cap);
    EXPECT_EQ(v.queries_used, oracle.count());
    if (v.rejected()) {
      ++rejected;
      EXPECT_TRUE(validate_certificate(f, property, v.certificate));
    }
  }
  return rejected;
}

}  // namespace

TEST(LineBudgets, Examples) {
  EXPECT_EQ(monotone_line_budget(1024, 0.1, 0.5), 12000U);
  EXPECT_EQ(convex_line_budget(1024, 0.1, 0.0), 18000U);
  EXPECT_EQ(monotone_line_iterations(0.25), 8U);
  EXPECT_EQ(bdp_line_view_iterations(0.25), 29U);  // ceil(4 ln 6 / 0.25)
  EXPECT_EQ(bdp_line_budget(64, 0.25, 0.0),
            2 * monotone_line_budget(64, 0.0625, 0.0));
  EXPECT_EQ(monotone_line_budget(1, 0.5, 0.0), 1U);
}

TEST(MonotoneLine, ConstantAlwaysAccepts) {
  const auto f = reals(std::vector<double>(16, 7.0));
  EXPECT_EQ(rejections([](QueryOracle& o, Rng& r) {
              return test_monotone_line(o, 0.5, 0.0, r);
            },
                       f, Property::monotone_line(), 200, 1),
            0U);
}

TEST(MonotoneLine, BudgetRespectedAtHalfErasure) {
  std::vector<double> v(1024);
  std::iota(v.rbegin(), v.rend(), 0.0);
  Rng rng(4);
  const auto f = erase_random(reals(v), 0.5, rng);
  rejections([](QueryOracle& o, Rng& r) {
    return test_monotone_line(o, 0.1, 0.5, r);
  },
             f, Property::monotone_line(), 50, 2, 12000);
}

TEST(MonotoneLine, DecreasingIsRejected) {
  std::vector<double> v(64);
  std::iota(v.rbegin(), v.rend(), 0.0);
  const auto f = reals(v);
  EXPECT_EQ(distance_to_monotone_line(f).relative, Rational(63, 64));
  const auto r = rejections([](QueryOracle& o, Rng& rng) {
    return test_monotone_line(o, 0.25, 0.0, rng);
  },
                            f, Property::monotone_line(), 500, 3,
                            monotone_line_budget(64, 0.25, 0.0));
  EXPECT_GE(r, 300U);
}

TEST(MonotoneLine, OneSidedOnRestorableWithErasures) {
  Rng gen(8);
  for (int inst = 0; inst < 20; ++inst) {
    const auto f = generate_member_instance(Property::monotone_line(),
                                            Domain::line(64), 0.3,
                                            ErasureStrategy::Random, gen);
    EXPECT_EQ(rejections([](QueryOracle& o, Rng& r) {
                return test_monotone_line(o, 0.2, 0.3, r);
              },
                         f, Property::monotone_line(), 50, inst),
              0U);
  }
}

TEST(BinarySearch, UniqueNonerasedPoint) {
  std::vector<PointValue> v(8, PointValue::erased());
  v[5] = PointValue::real(1.0);
  const ErasedFunction f(Domain::line(8), v);
  QueryOracle oracle(f);
  LineAccess line(oracle);
  Rng rng(1);
  int checks = 0;
  const auto r = randomized_binary_search(
      line, 5, 1.0, rng, [&](std::uint32_t, double, std::uint32_t, double) {
        ++checks;
        return false;
      });
  EXPECT_FALSE(r.has_value());
  EXPECT_EQ(checks, 0);
}

TEST(BinarySearch, PathLengthDistribution) {
  // N = {0, 1, 2}, s = 1. Enumerating pivot sequences: the first pivot is s
  // with probability 1/3; otherwise the remaining two-point interval needs
  // one or two more draws, each with probability 1/2.
  const auto f = reals({1, 2, 3});
  const Rng master(5);
  std::vector<int> by_length(4, 0);
  const int trials = 60000;
  for (int t = 0; t < trials; ++t) {
    QueryOracle oracle(f);
    LineAccess line(oracle);
    Rng rng = master.split(t);
    int pivots = 1;
    randomized_binary_search(line, 1, 2.0, rng,
                             [&](std::uint32_t, double, std::uint32_t, double) {
                               ++pivots;
                               return false;
                             });
    ASSERT_LE(pivots, 3);
    ++by_length[pivots];
  }
  for (int len = 1; len <= 3; ++len) {
    EXPECT_NEAR(by_length[len] / static_cast<double>(trials), 1.0 / 3.0, 0.01);
  }
}

TEST(BinarySearch, MonotoneInputNeverRejects) {
  const auto f = reals({0, 0, 1, 3, 3, 4, 9, 10});
  QueryOracle oracle(f);
  LineAccess line(oracle);
  Rng rng(2);
  for (std::uint32_t s = 0; s < 8; ++s) {
    for (int rep = 0; rep < 50; ++rep) {
      EXPECT_FALSE(randomized_binary_search(line, s, f.value(s), rng,
                                            monotone_pair_violated));
    }
  }
}

TEST(SearchTrees, EnumerationCountsAreCatalan) {
  const std::vector<std::uint32_t> keys{0, 2, 3, 5, 7};
  EXPECT_EQ(SearchTree::enumerate(keys, 8).size(), 42U);
  EXPECT_EQ(SearchTree::enumerate({1, 2, 3, 4, 5, 6}, 8).size(), 132U);
}

TEST(SearchTrees, SearchableSetIsMonotone) {
  // Every BST on <= 6 nonerased points of a line of length <= 10.
  Rng rng(17);
  for (int inst = 0; inst < 60; ++inst) {
    const std::uint64_t n = 4 + rng.uniform_below(7);
    auto f = random_line(rng, n, static_cast<std::uint32_t>(n), 5);
    auto pts = f.nonerased();
    while (pts.size() > 6) {
      std::vector<Index> drop{pts[rng.uniform_below(pts.size())]};
      f = erase_points(f, drop);
      pts = f.nonerased();
    }
    const std::vector<std::uint32_t> keys(pts.begin(), pts.end());
    for (const SearchTree& tree :
         SearchTree::enumerate(keys, static_cast<std::uint32_t>(n))) {
      std::vector<double> searchable;
      for (std::uint32_t s : keys) {
        if (is_searchable(tree, s, f)) searchable.push_back(f.value(s));
      }
      EXPECT_TRUE(std::is_sorted(searchable.begin(), searchable.end()));
    }
  }
}

TEST(SearchTrees, RandomHeightIsLogarithmic) {
  Rng rng(3);
  double sum = 0;
  for (int t = 0; t < 200; ++t) sum += random_bst_height(1024, rng);
  EXPECT_LE(sum / 200, 5.0 * 10);
  const std::vector<std::uint32_t> keys{0, 1, 2, 3, 4, 5, 6};
  const auto balanced = SearchTree::build(
      keys, 7, [](std::size_t a, std::size_t b) { return (a + b) / 2; });
  EXPECT_EQ(balanced.height(), 3U);
  EXPECT_EQ(balanced.path_to(0).size(), 3U);
}

TEST(BdpTransforms, LipschitzHandExample) {
  const auto b = StepBounds::lipschitz(3, 1.0);
  const BdpTransforms t(b);
  const std::vector<double> f{0, 2, 1};
  const std::vector<double> g{-2, 1, 1};
  const std::vector<double> h{-2, -3, -1};
  for (std::uint32_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(t.g(i, f[i]), g[i]);
    EXPECT_DOUBLE_EQ(t.h(i, f[i]), h[i]);
  }
  EXPECT_TRUE(violates_bdp_line(b, 0, 0.0, 1, 2.0));
  EXPECT_GT(t.h(0, f[0]), t.h(1, f[1]));
}

TEST(BdpTransforms, InfiniteBoundsRejected) {
  EXPECT_THROW(BdpTransforms(StepBounds::monotone(4)), PreconditionViolated);
}

TEST(BdpTransforms, MembersMapToMonotonePair) {
  Rng rng(6);
  const auto b = StepBounds::constant(8, -2.0, 3.0);
  const BdpTransforms t(b);
  for (int inst = 0; inst < 200; ++inst) {
    std::vector<double> f(8, 0.0);
    for (int i = 1; i < 8; ++i) {
      f[i] = f[i - 1] - 2 + static_cast<double>(rng.uniform_below(6));
    }
    for (std::uint32_t i = 0; i < 8; ++i) {
      for (std::uint32_t j = i + 1; j < 8; ++j) {
        ASSERT_FALSE(definitely_greater(t.g(i, f[i]), t.g(j, f[j])));
        ASSERT_FALSE(definitely_greater(t.h(i, f[i]), t.h(j, f[j])));
      }
    }
  }
}

namespace {

struct RandomBdp {
  std::vector<double> f;
  std::vector<double> lower;
  std::vector<double> upper;
};

RandomBdp random_bdp(Rng& rng, std::size_t n, bool allow_infinite) {
  RandomBdp r;
  for (std::size_t i = 0; i < n; ++i) {
    r.f.push_back(static_cast<double>(rng.uniform_below(21)) - 10.0);
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const double l = static_cast<double>(rng.uniform_below(6)) - 3.0;
    const double u = l + 1.0 + static_cast<double>(rng.uniform_below(4));
    const bool inf_l = allow_infinite && rng.uniform_below(5) == 0;
    const bool inf_u = allow_infinite && rng.uniform_below(5) == 0;
    r.lower.push_back(inf_l ? -kInf : l);
    r.upper.push_back(inf_u ? kInf : u);
  }
  return r;
}

}  // namespace

TEST(BdpTransforms, SymmetrizingShiftPreservesViolations) {
  Rng rng(21);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 2 + rng.uniform_below(11);
    const RandomBdp r = random_bdp(rng, n, false);
    const StepBounds b(r.lower, r.upper);
    std::vector<double> gamma(n - 1);
    std::vector<double> sigma(n, 0.0);
    for (std::size_t t = 0; t + 1 < n; ++t) {
      gamma[t] = (r.upper[t] - r.lower[t]) / 2;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
      sigma[i] = sigma[i + 1] + (r.lower[i] + r.upper[i]) / 2;
    }
    std::vector<double> neg_gamma(gamma);
    for (double& g : neg_gamma) g = -g;
    const StepBounds symmetric(neg_gamma, gamma);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        ASSERT_EQ(violates_bdp_line(b, x, r.f[x], y, r.f[y]),
                  violates_bdp_line(symmetric, x, r.f[x] + sigma[x], y,
                                    r.f[y] + sigma[y]));
      }
    }
  }
}

TEST(BdpTransforms, ViewChecksMatchPairwiseViolations) {
  Rng rng(22);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t n = 2 + rng.uniform_below(11);
    const RandomBdp r = random_bdp(rng, n, true);
    const StepBounds b(r.lower, r.upper);
    const auto [g, h] = bdp_view_checks(b);
    for (std::uint32_t x = 0; x < n; ++x) {
      for (std::uint32_t y = x + 1; y < n; ++y) {
        ASSERT_EQ(violates_bdp_line(b, x, r.f[x], y, r.f[y]),
                  g(x, r.f[x], y, r.f[y]) || h(x, r.f[x], y, r.f[y]));
      }
    }
  }
}

TEST(BdpLine, MemberAccepts) {
  std::vector<double> v(32);
  for (int i = 0; i < 32; ++i) v[i] = 2.0 * i;
  const auto f = reals(v);
  const auto b = StepBounds::constant(32, 1.0, 3.0);
  EXPECT_EQ(rejections([&](QueryOracle& o, Rng& r) {
              return test_bdp_line(o, b, 0.25, 0.0, r);
            },
                       f, Property::bdp_line(b), 200, 4,
                       bdp_line_budget(32, 0.25, 0.0)),
            0U);
}

TEST(BdpLine, SawtoothRejected) {
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) v[i] = (i % 2) ? 10.0 : 0.0;
  const auto f = reals(v);
  const auto b = StepBounds::lipschitz(64, 1.0);
  EXPECT_GE(distance_to_bdp_line(f, b).relative, Rational(1, 4));
  const auto r = rejections([&](QueryOracle& o, Rng& rng) {
    return test_bdp_line(o, b, 0.25, 0.0, rng);
  },
                            f, Property::bdp_line(b), 500, 5,
                            bdp_line_budget(64, 0.25, 0.0));
  EXPECT_GE(r, 300U);
}

TEST(BdpLine, MonotoneBoundsDispatch) {
  std::vector<double> v(64);
  std::iota(v.rbegin(), v.rend(), 0.0);
  const auto f = reals(v);
  const auto b = StepBounds::monotone(64);
  const auto r = rejections([&](QueryOracle& o, Rng& rng) {
    return test_bdp_line(o, b, 0.25, 0.0, rng);
  },
                            f, Property::bdp_line(b), 200, 6,
                            monotone_line_budget(64, 0.25, 0.0));
  EXPECT_GE(r, 120U);
}

TEST(Slopes, Comparison) {
  EXPECT_TRUE(slope_greater(Secant{0, 0, 1, 3}, Secant{1, 3, 2, 4}));
  EXPECT_FALSE(slope_greater(Secant{0, 0, 1, 1}, Secant{1, 1, 3, 3}));
  EXPECT_FALSE(slope_greater(Secant{0, 0, 3, 1}, Secant{3, 1, 6, 2}));
}

TEST(Interval, HandExampleRejects) {
  const auto f = reals({0, 3, 4});
  QueryOracle oracle(f);
  LineAccess line(oracle);
  const PivotSource pivots = [&](std::uint32_t, std::uint32_t) {
    return LineAccess::Hit{1, 3.0};
  };
  std::uint64_t walking = 0;
  const auto r = test_interval(IntervalFrame{0, 2, {}, {}, {}, 1}, line,
                               pivots, walking);
  EXPECT_TRUE(r.rejected);
  EXPECT_EQ(r.certificate.kind, Certificate::Kind::SlopeChain);
  EXPECT_EQ(r.certificate.points, (std::vector<Index>{0, 1, 1, 2}));
  EXPECT_EQ(walking, 2U);
}

TEST(Interval, PivotIsSearchPointStopsAfterCheck) {
  const auto f = reals({0, 1, 4, 9});
  QueryOracle oracle(f);
  LineAccess line(oracle);
  int draws = 0;
  const PivotSource pivots = [&](std::uint32_t, std::uint32_t) {
    ++draws;
    return LineAccess::Hit{2, 4.0};
  };
  std::uint64_t walking = 0;
  EXPECT_FALSE(test_interval(IntervalFrame{0, 3, {}, {}, {}, 2}, line, pivots,
                             walking)
                   .rejected);
  EXPECT_EQ(draws, 1);
}

TEST(Interval, ConvexNeverRejectsUnderAnyPivotOrder) {
  for (const auto& vals : {std::vector<double>{0, 1, 4, 9},
                           std::vector<double>{5, 2, 1, 1, 2, 6, 11}}) {
    const auto f = reals(vals);
    std::vector<std::uint32_t> keys(vals.size());
    std::iota(keys.begin(), keys.end(), 0U);
    for (const SearchTree& tree : SearchTree::enumerate(
             keys, static_cast<std::uint32_t>(vals.size()))) {
      for (std::uint32_t s : keys) {
        EXPECT_FALSE(convex_path_rejects(tree, s, f, AnchorPolicy::Merged));
        EXPECT_FALSE(
            convex_path_rejects(tree, s, f, AnchorPolicy::IncomingOnly));
      }
    }
  }
}

TEST(Interval, WitnessFractionAtLeastDistance) {
  // Per tree, the rejecting search points cover at least the distance.
  Rng rng(31);
  for (AnchorPolicy policy :
       {AnchorPolicy::Merged, AnchorPolicy::IncomingOnly}) {
    int checked = 0;
    for (int inst = 0; inst < 80; ++inst) {
      const std::uint64_t n = 3 + rng.uniform_below(8);
      auto f = random_line(rng, n, static_cast<std::uint32_t>(n / 3), 8);
      auto pts = f.nonerased();
      while (pts.size() > (inst % 4 == 0 ? 8U : 6U)) {
        f = erase_points(f, {pts[rng.uniform_below(pts.size())]});
        pts = f.nonerased();
      }
      const auto report = distance_to_convex_line(f);
      const std::vector<std::uint32_t> keys(pts.begin(), pts.end());
      for (const SearchTree& tree :
           SearchTree::enumerate(keys, static_cast<std::uint32_t>(n))) {
        std::uint64_t witnesses = 0;
        for (std::uint32_t s : keys) {
          if (convex_path_rejects(tree, s, f, policy)) ++witnesses;
        }
        ASSERT_GE(Rational(static_cast<std::int64_t>(witnesses),
                           static_cast<std::int64_t>(keys.size())),
                  report.relative)
            << "policy " << static_cast<int>(policy) << " instance " << inst;
        ++checked;
      }
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(ConvexLine, SquareAccepts) {
  std::vector<double> v(32);
  for (int i = 0; i < 32; ++i) v[i] = static_cast<double>(i) * i;
  const auto f = reals(v);
  EXPECT_EQ(rejections([](QueryOracle& o, Rng& r) {
              return test_convex_line(o, 0.5, 0.0, r);
            },
                       f, Property::convex_line(), 200, 7,
                       convex_line_budget(32, 0.5, 0.0)),
            0U);
}

TEST(ConvexLine, ConcaveRejectedUnderErasure) {
  std::vector<double> v(64);
  for (int i = 0; i < 64; ++i) v[i] = -static_cast<double>(i) * i;
  Rng er(9);
  const auto f = erase_random(reals(v), 0.2, er);
  EXPECT_GE(distance_to_convex_line(f).relative, Rational(1, 4));
  const auto r = rejections([](QueryOracle& o, Rng& rng) {
    return test_convex_line(o, 0.25, 0.2, rng);
  },
                            f, Property::convex_line(), 500, 8,
                            convex_line_budget(64, 0.25, 0.2));
  EXPECT_GE(r, 300U);
}

TEST(ConvexLine, WalkingAtMostTwiceSampling) {
  Rng gen(12);
  for (double alpha : {0.2, 0.5, 0.7}) {
    const auto f = generate_member_instance(Property::convex_line(),
                                            Domain::line(256), alpha,
                                            ErasureStrategy::Random, gen);
    const Rng master(alpha * 100);
    const int trials = 400;
    double sum_w = 0, sum_s = 0, sum_d = 0, sq_d = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = master.split(t);
      QueryOracle oracle(f);
      const Verdict v = test_convex_line(oracle, 0.25, alpha, rng);
      ASSERT_FALSE(v.rejected());
      const double w = static_cast<double>(v.walking_queries);
      const double s = static_cast<double>(v.queries_used) - w;
      sum_w += w;
      sum_s += s;
      sum_d += w - 2 * s;
      sq_d += (w - 2 * s) * (w - 2 * s);
    }
    const double mw = sum_w / trials;
    const double ms = sum_s / trials;
    const double md = sum_d / trials;
    const double se = std::sqrt((sq_d / trials - md * md) / trials);
    EXPECT_LE(mw, 2 * ms + 3 * se) << "alpha " << alpha;
  }
}

TEST(Baseline, PivotErasureDefeatsMidpointSearch) {
  std::vector<double> v(64);
  std::iota(v.rbegin(), v.rend(), 0.0);
  const auto f = erase_binary_search_pivots(reals(v), 0.25);
  EXPECT_GE(distance_to_monotone_line(f).relative, Rational(1, 4));
  const auto baseline = rejections([](QueryOracle& o, Rng& r) {
    return test_monotone_line_midpoint_baseline(o, 0.25, 0.25, r);
  },
                                   f, Property::monotone_line(), 500, 10);
  const auto resilient = rejections([](QueryOracle& o, Rng& r) {
    return test_monotone_line(o, 0.25, 0.25, r);
  },
                                    f, Property::monotone_line(), 500, 10);
  EXPECT_LT(baseline, 500U / 3);
  EXPECT_GE(resilient, 300U);
}
