#include "ert/line_testers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ert/errors.hpp"
#include "ert/numeric.hpp"

namespace ert {
namespace {

void require_line(const QueryOracle& oracle) {
  if (!oracle.domain().is_line()) {
    throw PreconditionViolated("line tester needs a Line domain");
  }
}

void require_params(double eps, double alpha) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionViolated("eps must lie in (0, 1)");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in [0, 1)");
  }
}

std::uint64_t at_least_one(std::uint64_t q) { return std::max<std::uint64_t>(q, 1); }

Certificate pair_certificate(const LineAccess& line,
                             std::pair<std::uint32_t, std::uint32_t> pair) {
  return Certificate{Certificate::Kind::ViolatedPair,
                     {line.point(pair.first), line.point(pair.second)}};
}

}  // namespace

LineAccess::LineAccess(QueryOracle& oracle, AxisLine line)
    : oracle_(oracle),
      line_(std::move(line)),
      base_(line_.base(oracle.domain())),
      stride_(oracle.domain().stride(line_.dim)),
      size_(static_cast<std::uint32_t>(oracle.domain().side())) {}

LineAccess::LineAccess(QueryOracle& oracle)
    : LineAccess(oracle, AxisLine{0, Coords(oracle.domain().dims(), 0)}) {}

LineAccess::Hit LineAccess::sample_nonerased(std::uint32_t lo,
                                             std::uint32_t hi, Rng& rng) {
  // Same draw-and-query loop as sample_nonerased_uniform, without building a
  // Box per call.
  for (;;) {
    const auto pos = static_cast<std::uint32_t>(rng.uniform_in(lo, hi));
    const PointValue v = query(pos);
    if (!v.is_erased()) return {pos, v.value()};
  }
}

bool monotone_pair_violated(std::uint32_t, double f_lo, std::uint32_t,
                            double f_hi) {
  return f_lo > f_hi;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> randomized_binary_search(
    LineAccess& line, std::uint32_t s, double f_s, Rng& rng,
    const PairCheck& check) {
  std::uint32_t lo = 0;
  std::uint32_t hi = line.size() - 1;
  for (;;) {
    const LineAccess::Hit m = line.sample_nonerased(lo, hi, rng);
    if (s < m.pos) {
      if (check(s, f_s, m.pos, m.value)) return std::pair{s, m.pos};
      hi = m.pos - 1;
    } else if (s > m.pos) {
      if (check(m.pos, m.value, s, f_s)) return std::pair{m.pos, s};
      lo = m.pos + 1;
    } else {
      return std::nullopt;
    }
  }
}

std::uint64_t monotone_line_budget(std::uint64_t n, double eps, double alpha) {
  return at_least_one(ceil_count(60.0 * log2n(n) / (eps * (1.0 - alpha))));
}

std::uint64_t monotone_line_iterations(double eps) {
  return ceil_count(2.0 / eps);
}

std::uint64_t bdp_line_view_budget(std::uint64_t n, double eps, double alpha) {
  return monotone_line_budget(n, eps / 4.0, alpha);
}

std::uint64_t bdp_line_budget(std::uint64_t n, double eps, double alpha) {
  return 2 * bdp_line_view_budget(n, eps, alpha);
}

std::uint64_t bdp_line_view_iterations(double eps) {
  return ceil_count(std::log(6.0) * 4.0 / eps);
}

std::uint64_t convex_line_budget(std::uint64_t n, double eps, double alpha) {
  return at_least_one(ceil_count(180.0 * log2n(n) / (eps * (1.0 - alpha))));
}

std::uint64_t convex_line_iterations(double eps) {
  return ceil_count(2.0 / eps);
}

Verdict test_monotone_line(QueryOracle& oracle, double eps, double alpha,
                           Rng& rng) {
  require_line(oracle);
  require_params(eps, alpha);
  const std::uint64_t n = oracle.domain().side();
  oracle.set_budget(monotone_line_budget(n, eps, alpha));
  LineAccess line(oracle);
  const std::uint64_t iterations = monotone_line_iterations(eps);
  try {
    for (std::uint64_t it = 0; it < iterations; ++it) {
      const auto s = line.sample_nonerased(0, line.size() - 1, rng);
      if (auto pair = randomized_binary_search(line, s.pos, s.value, rng,
                                               monotone_pair_violated)) {
        return Verdict::reject(pair_certificate(line, *pair), oracle.count());
      }
    }
  } catch (const BudgetExhausted&) {
    return Verdict::accept(Reason::BudgetExhausted, oracle.count());
  }
  return Verdict::accept(Reason::AllChecksPassed, oracle.count());
}

BdpTransforms::BdpTransforms(const StepBounds& bounds) {
  if (!bounds.all_finite()) {
    throw PreconditionViolated("g/h value transforms need finite bounds");
  }
  const std::uint64_t n = bounds.side();
  gamma_suffix_.assign(n, 0.0L);
  shift_suffix_.assign(n, 0.0L);
  for (std::uint64_t i = n - 1; i-- > 0;) {
    const long double l = bounds.lower(i);
    const long double u = bounds.upper(i);
    gamma_suffix_[i] = gamma_suffix_[i + 1] + (u - l) / 2;
    shift_suffix_[i] = shift_suffix_[i + 1] + (l + u) / 2;
  }
}

double BdpTransforms::g(std::uint32_t i, double v) const {
  return static_cast<double>(v + shift_suffix_[i] - gamma_suffix_[i]);
}

double BdpTransforms::h(std::uint32_t i, double v) const {
  return static_cast<double>(-(v + shift_suffix_[i]) - gamma_suffix_[i]);
}

BdpTransforms bdp_to_monotone_transforms(const StepBounds& bounds) {
  return BdpTransforms(bounds);
}

std::pair<PairCheck, PairCheck> bdp_view_checks(const StepBounds& bounds) {
  if (bounds.all_finite()) {
    auto t = std::make_shared<const BdpTransforms>(bounds);
    PairCheck g = [t](std::uint32_t lo, double f_lo, std::uint32_t hi,
                      double f_hi) {
      return definitely_greater(t->g(lo, f_lo), t->g(hi, f_hi));
    };
    PairCheck h = [t](std::uint32_t lo, double f_lo, std::uint32_t hi,
                      double f_hi) {
      return definitely_greater(t->h(lo, f_lo), t->h(hi, f_hi));
    };
    return {std::move(g), std::move(h)};
  }
  auto b = std::make_shared<const StepBounds>(bounds);
  PairCheck g = [b](std::uint32_t lo, double f_lo, std::uint32_t hi,
                    double f_hi) {
    return violates_directed(f_lo, f_hi, -b->lower_sum(lo, hi));
  };
  PairCheck h = [b](std::uint32_t lo, double f_lo, std::uint32_t hi,
                    double f_hi) {
    return violates_directed(f_hi, f_lo, b->upper_sum(lo, hi));
  };
  return {std::move(g), std::move(h)};
}

Verdict test_bdp_line(QueryOracle& oracle, const StepBounds& bounds,
                      double eps, double alpha, Rng& rng) {
  require_line(oracle);
  require_params(eps, alpha);
  const std::uint64_t n = oracle.domain().side();
  if (bounds.side() != n) {
    throw PreconditionViolated("bounds do not match the line length");
  }
  if (bounds.is_monotone()) return test_monotone_line(oracle, eps, alpha, rng);

  const std::uint64_t view_budget = bdp_line_view_budget(n, eps, alpha);
  oracle.set_budget(2 * view_budget);
  const std::uint64_t iterations = bdp_line_view_iterations(eps);
  const auto [g_check, h_check] = bdp_view_checks(bounds);
  LineAccess line(oracle);
  bool exhausted = false;
  for (const PairCheck* check : {&g_check, &h_check}) {
    ScopedBudget scope(oracle, view_budget);
    try {
      for (std::uint64_t it = 0; it < iterations; ++it) {
        const auto s = line.sample_nonerased(0, line.size() - 1, rng);
        if (auto pair =
                randomized_binary_search(line, s.pos, s.value, rng, *check)) {
          return Verdict::reject(pair_certificate(line, *pair),
                                 oracle.count());
        }
      }
    } catch (const BudgetExhausted&) {
      exhausted = true;
    }
  }
  return Verdict::accept(
      exhausted ? Reason::BudgetExhausted : Reason::AllChecksPassed,
      oracle.count());
}

Verdict test_monotone_line_midpoint_baseline(QueryOracle& oracle, double eps,
                                             double alpha, Rng& rng) {
  require_line(oracle);
  require_params(eps, alpha);
  const std::uint64_t n = oracle.domain().side();
  oracle.set_budget(monotone_line_budget(n, eps, alpha));
  LineAccess line(oracle);
  const std::uint64_t iterations = monotone_line_iterations(eps);
  try {
    for (std::uint64_t it = 0; it < iterations; ++it) {
      const auto s = line.sample_nonerased(0, line.size() - 1, rng);
      std::uint32_t lo = 0;
      std::uint32_t hi = line.size() - 1;
      while (lo <= hi) {
        const std::uint32_t m = lo + (hi - lo) / 2;
        const PointValue v = line.query(m);
        if (v.is_erased()) break;
        if (s.pos < m) {
          if (s.value > v.value()) {
            return Verdict::reject(pair_certificate(line, {s.pos, m}),
                                   oracle.count());
          }
          hi = m - 1;
        } else if (s.pos > m) {
          if (v.value() > s.value) {
            return Verdict::reject(pair_certificate(line, {m, s.pos}),
                                   oracle.count());
          }
          lo = m + 1;
        } else {
          break;
        }
      }
    }
  } catch (const BudgetExhausted&) {
    return Verdict::accept(Reason::BudgetExhausted, oracle.count());
  }
  return Verdict::accept(Reason::AllChecksPassed, oracle.count());
}

bool slope_greater(const Secant& p, const Secant& q) {
  const double lhs = (p.fb - p.fa) * (static_cast<double>(q.b) - q.a);
  const double rhs = (q.fb - q.fa) * (static_cast<double>(p.b) - p.a);
  return definitely_greater(lhs, rhs);
}

IntervalResult test_interval(IntervalFrame frame, LineAccess& line,
                             const PivotSource& pivots,
                             std::uint64_t& walking_queries,
                             AnchorPolicy policy) {
  std::vector<Anchor> merged;
  std::vector<Secant> chain;
  for (;;) {
    const LineAccess::Hit x = pivots(frame.lo, frame.hi);

    std::optional<Anchor> y;
    for (std::uint32_t p = x.pos + 1; p <= frame.hi && p > x.pos; ++p) {
      ++walking_queries;
      const PointValue v = line.query(p);
      if (!v.is_erased()) {
        y = Anchor{p, v.value()};
        break;
      }
    }
    std::optional<Anchor> z;
    for (std::uint32_t p = x.pos; p > frame.lo;) {
      --p;
      ++walking_queries;
      const PointValue v = line.query(p);
      if (!v.is_erased()) {
        z = Anchor{p, v.value()};
        break;
      }
    }

    merged = frame.anchors;
    merged.push_back({x.pos, x.value});
    if (y) merged.push_back(*y);
    if (z) merged.push_back(*z);
    std::sort(merged.begin(), merged.end(),
              [](const Anchor& a, const Anchor& b) { return a.pos < b.pos; });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const Anchor& a, const Anchor& b) {
                               return a.pos == b.pos;
                             }),
                 merged.end());

    chain.clear();
    if (frame.left_slope) chain.push_back(*frame.left_slope);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      chain.push_back(Secant{merged[i].pos, merged[i].value,
                             merged[i + 1].pos, merged[i + 1].value});
    }
    if (frame.right_slope) chain.push_back(*frame.right_slope);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      if (slope_greater(chain[i], chain[i + 1])) {
        return {true,
                Certificate{Certificate::Kind::SlopeChain,
                            {chain[i].a, chain[i].b, chain[i + 1].a,
                             chain[i + 1].b}}};
      }
    }

    const std::vector<Anchor>& source =
        policy == AnchorPolicy::Merged ? merged : frame.anchors;
    std::vector<Anchor> side;
    if (frame.s < x.pos) {
      for (const Anchor& a : source) {
        if (a.pos < x.pos) side.push_back(a);
      }
      // s is nonerased and left of x, so the walk found z.
      frame.hi = z->pos;
      frame.right_slope = Secant{z->pos, z->value, x.pos, x.value};
    } else if (frame.s > x.pos) {
      for (const Anchor& a : source) {
        if (a.pos > x.pos) side.push_back(a);
      }
      frame.lo = y->pos;
      frame.left_slope = Secant{x.pos, x.value, y->pos, y->value};
    } else {
      return {};
    }
    frame.anchors = std::move(side);
  }
}

Verdict test_convex_line(QueryOracle& oracle, double eps, double alpha,
                         Rng& rng, AnchorPolicy policy) {
  require_line(oracle);
  require_params(eps, alpha);
  if (oracle.kind() != ValueKind::Real) {
    throw PreconditionViolated("convexity needs real values");
  }
  const std::uint64_t n = oracle.domain().side();
  oracle.set_budget(convex_line_budget(n, eps, alpha));
  LineAccess line(oracle);
  const std::uint64_t iterations = convex_line_iterations(eps);
  const PivotSource pivots = [&](std::uint32_t lo, std::uint32_t hi) {
    return line.sample_nonerased(lo, hi, rng);
  };
  std::uint64_t walking = 0;
  try {
    for (std::uint64_t it = 0; it < iterations; ++it) {
      const auto s = line.sample_nonerased(0, line.size() - 1, rng);
      IntervalFrame frame{0, line.size() - 1, {}, std::nullopt, std::nullopt,
                          s.pos};
      IntervalResult r =
          test_interval(std::move(frame), line, pivots, walking, policy);
      if (r.rejected) {
        for (Index& p : r.certificate.points) p = line.point(static_cast<std::uint32_t>(p));
        Verdict v = Verdict::reject(std::move(r.certificate), oracle.count());
        v.walking_queries = walking;
        return v;
      }
    }
  } catch (const BudgetExhausted&) {
    Verdict v = Verdict::accept(Reason::BudgetExhausted, oracle.count());
    v.walking_queries = walking;
    return v;
  }
  Verdict v = Verdict::accept(Reason::AllChecksPassed, oracle.count());
  v.walking_queries = walking;
  return v;
}

// --- search trees ----------------------------------------------------------

SearchTree SearchTree::build(
    const std::vector<std::uint32_t>& keys, std::uint32_t n,
    const std::function<std::size_t(std::size_t, std::size_t)>& choose) {
  SearchTree tree;
  tree.nodes_.reserve(keys.size());
  std::function<std::int32_t(std::size_t, std::size_t, std::uint32_t,
                             std::uint32_t)>
      rec = [&](std::size_t first, std::size_t last, std::uint32_t lo,
                std::uint32_t hi) -> std::int32_t {
    if (first == last) return -1;
    const std::size_t k = choose(first, last);
    const std::uint32_t key = keys[k];
    const auto id = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.push_back(Node{key, lo, hi});
    const std::int32_t left = k > first ? rec(first, k, lo, key - 1) : -1;
    const std::int32_t right = k + 1 < last ? rec(k + 1, last, key + 1, hi) : -1;
    tree.nodes_[id].left = left;
    tree.nodes_[id].right = right;
    return id;
  };
  tree.root_ = rec(0, keys.size(), 0, n - 1);
  return tree;
}

SearchTree SearchTree::random(const std::vector<std::uint32_t>& keys,
                              std::uint32_t n, Rng& rng) {
  return build(keys, n, [&](std::size_t first, std::size_t last) {
    return first + rng.uniform_below(last - first);
  });
}

std::vector<SearchTree> SearchTree::enumerate(
    const std::vector<std::uint32_t>& keys, std::uint32_t n) {
  // Each shape is a preorder list of root choices; enumerate them by
  // recursive expansion of the key ranges.
  using Shape = std::vector<std::size_t>;
  std::function<std::vector<Shape>(std::size_t, std::size_t)> shapes =
      [&](std::size_t first, std::size_t last) -> std::vector<Shape> {
    if (first == last) return {Shape{}};
    std::vector<Shape> out;
    for (std::size_t k = first; k < last; ++k) {
      const auto left = shapes(first, k);
      const auto right = shapes(k + 1, last);
      for (const auto& l : left) {
        for (const auto& r : right) {
          Shape s{k};
          s.insert(s.end(), l.begin(), l.end());
          s.insert(s.end(), r.begin(), r.end());
          out.push_back(std::move(s));
        }
      }
    }
    return out;
  };
  std::vector<SearchTree> trees;
  for (const Shape& shape : shapes(0, keys.size())) {
    std::size_t next = 0;
    trees.push_back(build(keys, n, [&](std::size_t, std::size_t) {
      return shape[next++];
    }));
  }
  return trees;
}

std::uint32_t SearchTree::height() const {
  if (root_ < 0) return 0;
  std::uint32_t best = 0;
  std::vector<std::pair<std::int32_t, std::uint32_t>> stack{{root_, 1}};
  while (!stack.empty()) {
    const auto [id, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    if (nodes_[id].left >= 0) stack.push_back({nodes_[id].left, depth + 1});
    if (nodes_[id].right >= 0) stack.push_back({nodes_[id].right, depth + 1});
  }
  return best;
}

std::vector<std::int32_t> SearchTree::path_to(std::uint32_t s) const {
  std::vector<std::int32_t> path;
  std::int32_t id = root_;
  while (id >= 0) {
    path.push_back(id);
    const Node& node = nodes_[id];
    if (s == node.key) return path;
    id = s < node.key ? node.left : node.right;
  }
  throw PreconditionViolated("search key is not in the tree");
}

std::uint32_t random_bst_height(std::uint32_t m, Rng& rng) {
  if (m == 0) return 0;
  const auto k = static_cast<std::uint32_t>(rng.uniform_below(m));
  return 1 + std::max(random_bst_height(k, rng),
                      random_bst_height(m - 1 - k, rng));
}

std::uint64_t path_sampling_queries(const SearchTree& tree, std::uint32_t s,
                                    LineAccess& line, Rng& rng) {
  const std::uint64_t before = line.oracle().count();
  for (const std::int32_t id : tree.path_to(s)) {
    const auto& node = tree.nodes()[id];
    line.sample_nonerased(node.lo, node.hi, rng);
  }
  return line.oracle().count() - before;
}

bool is_searchable(const SearchTree& tree, std::uint32_t s,
                   const ErasedFunction& f) {
  const double fs = f.value(s);
  for (const std::int32_t id : tree.path_to(s)) {
    const std::uint32_t m = tree.nodes()[id].key;
    if (s < m && fs > f.value(m)) return false;
    if (s > m && fs < f.value(m)) return false;
  }
  return true;
}

bool convex_path_rejects(const SearchTree& tree, std::uint32_t s,
                         const ErasedFunction& f, AnchorPolicy policy) {
  QueryOracle oracle(f);
  LineAccess line(oracle);
  std::int32_t cursor = tree.root();
  const PivotSource pivots = [&](std::uint32_t, std::uint32_t) {
    const auto& node = tree.nodes()[cursor];
    cursor = s < node.key ? node.left : node.right;
    return LineAccess::Hit{node.key, line.query(node.key).value()};
  };
  std::uint64_t walking = 0;
  IntervalFrame frame{0, line.size() - 1, {}, std::nullopt, std::nullopt, s};
  return test_interval(std::move(frame), line, pivots, walking, policy)
      .rejected;
}

}  // namespace ert
