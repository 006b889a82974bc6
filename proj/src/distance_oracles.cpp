#include "ert/distance_oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "ert/errors.hpp"
#include "ert/line_testers.hpp"
#include "ert/numeric.hpp"
#include "ert/transforms.hpp"

namespace ert {
namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

DistanceReport make_report(const Property& property, const ErasedFunction& f,
                           std::vector<Index> kept) {
  DistanceReport r;
  r.property = property.tag();
  r.total = f.nonerased_count();
  std::sort(kept.begin(), kept.end());
  r.absolute = r.total - kept.size();
  r.relative = Rational(static_cast<std::int64_t>(r.absolute),
                        static_cast<std::int64_t>(r.total));
  r.kept = std::move(kept);
  return r;
}

void require_line(const ErasedFunction& f) {
  if (!f.domain().is_line()) throw PreconditionViolated("needs a line domain");
}

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

// Violation edges x -> y between nonerased points (by position in `points`).
template <class Violates>
OrderEdges order_edges(const std::vector<Index>& points, Violates&& violates) {
  OrderEdges edges;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    for (std::uint32_t j = 0; j < points.size(); ++j) {
      if (i != j && violates(points[i], points[j])) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::function<bool(Index, Index)> grid_violation(const ErasedFunction& f,
                                                 const BoundingFamily* bounds) {
  if (bounds == nullptr || bounds->is_monotone()) {
    return [&f](Index x, Index y) {
      return f.domain().precedes_or_equal(x, y) && f.value(x) > f.value(y);
    };
  }
  return [&f, bounds](Index x, Index y) {
    return violates_directed(f.value(x), f.value(y),
                             quasi_metric(*bounds, f.domain(), x, y));
  };
}

DistanceReport order_distance(const ErasedFunction& f, const Property& property,
                              const std::function<bool(Index, Index)>& violates) {
  const auto points = f.nonerased();
  const OrderEdges edges = order_edges(points, violates);
  const auto m = static_cast<std::uint32_t>(points.size());
  const AntichainResult best = maximum_antichain(m, edges);
  std::vector<Index> kept;
  for (const std::uint32_t i : best.antichain) kept.push_back(points[i]);
  DistanceReport r = make_report(property, f, std::move(kept));
  r.matching_lower_bound = greedy_matching_size(m, edges);
  return r;
}

DistanceReport small_order_distance(
    const ErasedFunction& f, const Property& property,
    const std::function<bool(Index, Index)>& violates) {
  const auto points = f.nonerased();
  if (points.size() > 20) {
    throw SizeLimit("small-grid oracle is limited to 20 nonerased points");
  }
  const auto m = static_cast<std::uint32_t>(points.size());
  const OrderEdges edges = order_edges(points, violates);
  const auto cover = minimum_vertex_cover_small(m, edges);
  std::vector<bool> in_cover(m, false);
  for (const auto v : cover) in_cover[v] = true;
  std::vector<Index> kept;
  for (std::uint32_t i = 0; i < m; ++i) {
    if (!in_cover[i]) kept.push_back(points[i]);
  }
  DistanceReport r = make_report(property, f, std::move(kept));
  r.matching_lower_bound = greedy_matching_size(m, edges);
  return r;
}

// Pointwise extension of a consistent set under the quasi-metric m: every
// new point gets a value in [max_a f(a) - m(a,z), min_a f(a) + m(z,a)].
double pick_feasible(double lo, double hi) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(hi)) return hi;
  return 0.0;
}

std::vector<double> complete_line_bdp(const ErasedFunction& f,
                                      const StepBounds& bounds,
                                      const std::vector<Index>& kept) {
  const std::uint64_t n = f.domain().side();
  std::vector<char> is_kept(n, 0);
  for (const Index k : kept) is_kept[k] = 1;
  std::vector<double> out(n, 0.0);
  // next kept position to the right of each point
  std::vector<std::uint64_t> next(n + 1, n);
  for (std::uint64_t i = n; i-- > 0;) next[i] = is_kept[i] ? i : next[i + 1];
  for (std::uint64_t z = 0; z < n; ++z) {
    if (is_kept[z]) {
      out[z] = f.value(z);
      continue;
    }
    double lo = -kInf;
    double hi = kInf;
    if (z > 0) {
      lo = out[z - 1] + bounds.lower(z - 1);
      hi = out[z - 1] + bounds.upper(z - 1);
    }
    const std::uint64_t b = next[z];
    if (b < n) {
      lo = std::max(lo, f.value(b) - bounds.upper_sum(z, b));
      hi = std::min(hi, f.value(b) - bounds.lower_sum(z, b));
    }
    out[z] = pick_feasible(lo, hi);
  }
  return out;
}

std::vector<double> complete_grid_bdp(const ErasedFunction& f,
                                      const BoundingFamily& bounds,
                                      const std::vector<Index>& kept) {
  const Domain& domain = f.domain();
  std::vector<char> is_kept(domain.size(), 0);
  for (const Index k : kept) is_kept[k] = 1;
  std::vector<double> out(domain.size(), 0.0);
  std::vector<Index> fixed(kept.begin(), kept.end());
  for (const Index k : kept) out[k] = f.value(k);
  for (Index z = 0; z < domain.size(); ++z) {
    if (is_kept[z]) continue;
    double lo = -kInf;
    double hi = kInf;
    for (const Index a : fixed) {
      const double up = quasi_metric(bounds, domain, z, a);
      const double down = quasi_metric(bounds, domain, a, z);
      if (std::isfinite(down)) lo = std::max(lo, out[a] - down);
      if (std::isfinite(up)) hi = std::min(hi, out[a] + up);
    }
    out[z] = pick_feasible(lo, hi);
    fixed.push_back(z);
  }
  return out;
}

std::vector<double> complete_poset(const ErasedFunction& f, const Poset& poset,
                                   const std::vector<Index>& kept) {
  const std::uint64_t n = f.domain().size();
  std::vector<char> is_kept(n, 0);
  for (const Index k : kept) is_kept[k] = 1;
  std::vector<double> out(n, 0.0);
  std::vector<Index> fixed(kept.begin(), kept.end());
  for (const Index k : kept) out[k] = f.value(k);
  for (Index z = 0; z < n; ++z) {
    if (is_kept[z]) continue;
    double lo = -kInf;
    double hi = kInf;
    for (const Index a : fixed) {
      const auto za = static_cast<std::uint32_t>(z);
      const auto aa = static_cast<std::uint32_t>(a);
      if (poset.precedes(aa, za)) lo = std::max(lo, out[a]);
      if (poset.precedes(za, aa)) hi = std::min(hi, out[a]);
    }
    out[z] = pick_feasible(lo, hi);
    fixed.push_back(z);
  }
  return out;
}

std::vector<double> complete_convex(const ErasedFunction& f,
                                    const std::vector<Index>& kept) {
  const std::uint64_t n = f.domain().side();
  std::vector<double> out(n, 0.0);
  if (kept.empty()) return out;
  auto at = [&](std::size_t i) {
    return std::pair<double, double>{static_cast<double>(kept[i]),
                                     f.value(kept[i])};
  };
  if (kept.size() == 1) {
    std::fill(out.begin(), out.end(), f.value(kept[0]));
    return out;
  }
  std::size_t seg = 0;
  for (std::uint64_t z = 0; z < n; ++z) {
    while (seg + 2 < kept.size() && z > kept[seg + 1]) ++seg;
    const auto [x0, y0] = at(seg);
    const auto [x1, y1] = at(seg + 1);
    const double t = static_cast<double>(z);
    out[z] = y0 + (y1 - y0) * (t - x0) / (x1 - x0);
  }
  for (const Index k : kept) out[k] = f.value(k);
  return out;
}

std::vector<double> complete_k_runs(const ErasedFunction& f,
                                    const std::vector<Index>& kept) {
  const std::uint64_t n = f.domain().side();
  std::vector<double> out(n, kept.empty() ? 0.0 : f.value(kept[0]));
  std::size_t next = 0;
  double last = out.empty() ? 0.0 : out[0];
  for (std::uint64_t z = 0; z < n; ++z) {
    if (next < kept.size() && kept[next] == z) {
      last = f.value(z);
      ++next;
    }
    out[z] = last;
  }
  return out;
}

// Newton interpolation through `pts` (distinct x), evaluated on 0..p-1.
std::vector<double> interpolate_mod(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& pts,
    std::int64_t p) {
  const std::size_t m = pts.size();
  std::vector<std::int64_t> c(m);
  auto inv = [p](std::int64_t a) {
    std::int64_t r = 1;
    std::int64_t b = mod(a, p);
    for (std::int64_t e = p - 2; e > 0; e >>= 1) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
    }
    return r;
  };
  for (std::size_t i = 0; i < m; ++i) c[i] = mod(pts[i].second, p);
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      c[i] = mod(c[i] - c[i - 1], p) * inv(pts[i].first - pts[i - j].first) % p;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(p), 0.0);
  for (std::int64_t x = 0; x < p; ++x) {
    if (m == 0) break;
    std::int64_t acc = c[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
      acc = mod(acc * mod(x - pts[i].first, p) + c[i], p);
    }
    out[static_cast<std::size_t>(x)] = static_cast<double>(acc);
  }
  return out;
}

bool hypergrid_bdp_member(const Domain& domain, const std::vector<double>& v,
                          const BoundingFamily& bounds) {
  for (Index x = 0; x < domain.size(); ++x) {
    for (std::uint32_t r = 0; r < domain.dims(); ++r) {
      const std::uint32_t xr = domain.coord(x, r);
      if (xr + 1 >= domain.side()) continue;
      const double step = v[x + domain.stride(r)] - v[x];
      if (definitely_greater(bounds.dim(r).lower(xr), step) ||
          definitely_greater(step, bounds.dim(r).upper(xr))) {
        return false;
      }
    }
  }
  return true;
}

const BoundingFamily& bounds_of(const Property& property) {
  if (!property.bounds) throw PreconditionViolated("property needs bounds");
  return *property.bounds;
}

}  // namespace

Property Property::bdp_line(const StepBounds& b) {
  Property p{PropertyKind::BdpLine};
  p.bounds = BoundingFamily({b});
  return p;
}

Property Property::bdp_grid(const BoundingFamily& b) {
  Property p{PropertyKind::BdpGrid};
  p.bounds = b;
  return p;
}

Property Property::k_runs(std::uint32_t k) {
  Property p{PropertyKind::KRuns};
  p.k = k;
  return p;
}

Property Property::low_degree(std::uint32_t degree) {
  Property p{PropertyKind::LowDegree};
  p.degree = degree;
  return p;
}

Property Property::poset_monotone(std::shared_ptr<const Poset> poset) {
  Property p{PropertyKind::PosetMonotone};
  p.poset = std::move(poset);
  return p;
}

std::string Property::tag() const { return to_string(kind); }

const char* to_string(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::MonotoneLine: return "monotone-line";
    case PropertyKind::BdpLine: return "bdp-line";
    case PropertyKind::ConvexLine: return "convex-line";
    case PropertyKind::MonotoneGrid: return "monotone-grid";
    case PropertyKind::BdpGrid: return "bdp-grid";
    case PropertyKind::KRuns: return "k-runs";
    case PropertyKind::LowDegree: return "low-degree";
    case PropertyKind::PosetMonotone: return "poset-monotone";
  }
  return "?";
}

PropertyKind property_kind_from_tag(const std::string& tag) {
  for (const PropertyKind k :
       {PropertyKind::MonotoneLine, PropertyKind::BdpLine,
        PropertyKind::ConvexLine, PropertyKind::MonotoneGrid,
        PropertyKind::BdpGrid, PropertyKind::KRuns, PropertyKind::LowDegree,
        PropertyKind::PosetMonotone}) {
    if (tag == to_string(k)) return k;
  }
  throw ConfigError("unknown property tag: " + tag);
}

std::vector<std::size_t> longest_nondecreasing(const std::vector<double>& v) {
  std::vector<std::size_t> tails;  // index of the smallest tail per length
  std::vector<std::size_t> parent(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto it = std::upper_bound(
        tails.begin(), tails.end(), v[i],
        [&](double x, std::size_t t) { return x < v[t]; });
    if (it != tails.begin()) parent[i] = *(it - 1);
    if (it == tails.end()) {
      tails.push_back(i);
    } else {
      *it = i;
    }
  }
  std::vector<std::size_t> out;
  if (tails.empty()) return out;
  for (std::size_t i = tails.back(); i != v.size(); i = parent[i]) {
    out.push_back(i);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

DistanceReport distance_to_monotone_line(const ErasedFunction& f) {
  require_line(f);
  const auto points = f.nonerased();
  std::vector<double> values;
  values.reserve(points.size());
  for (const Index p : points) values.push_back(f.value(p));
  std::vector<Index> kept;
  for (const std::size_t i : longest_nondecreasing(values)) {
    kept.push_back(points[i]);
  }
  return make_report(Property::monotone_line(), f, std::move(kept));
}

DistanceReport distance_to_bdp_line(const ErasedFunction& f,
                                    const StepBounds& bounds) {
  require_line(f);
  if (bounds.side() != f.domain().side()) {
    throw PreconditionViolated("bounds do not match the line length");
  }
  const auto points = f.nonerased();
  const std::size_t m = points.size();
  // Directed bound sums telescope, so a subsequence is violation-free iff
  // each consecutive pair is.
  std::vector<std::size_t> len(m, 1);
  std::vector<std::size_t> parent(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (len[i] + 1 > len[j] &&
          !violates_bdp_line(bounds, points[i], f.value(points[i]), points[j],
                             f.value(points[j]))) {
        len[j] = len[i] + 1;
        parent[j] = i;
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (len[j] > len[best]) best = j;
  }
  std::vector<Index> kept;
  for (std::size_t i = best; i != m; i = parent[i]) kept.push_back(points[i]);
  return make_report(Property::bdp_line(bounds), f, std::move(kept));
}

DistanceReport distance_to_convex_line(const ErasedFunction& f) {
  require_line(f);
  if (f.kind() != ValueKind::Real) {
    throw PreconditionViolated("convexity needs real values");
  }
  const auto points = f.nonerased();
  const std::size_t m = points.size();
  if (m > 1024) throw SizeLimit("convex oracle is limited to 1024 points");
  if (m <= 2) return make_report(Property::convex_line(), f, points);
  auto secant = [&](std::size_t i, std::size_t j) {
    return Secant{static_cast<std::uint32_t>(points[i]), f.value(points[i]),
                  static_cast<std::uint32_t>(points[j]), f.value(points[j])};
  };
  // len[i][j]: longest convex subsequence ending with points i < j.
  std::vector<std::uint32_t> len(m * m, 2);
  std::vector<std::uint32_t> parent(m * m, kNone);
  std::size_t bi = 0;
  std::size_t bj = 1;
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Secant right = secant(i, j);
      for (std::size_t h = 0; h < i; ++h) {
        if (len[h * m + i] + 1 > len[i * m + j] &&
            !slope_greater(secant(h, i), right)) {
          len[i * m + j] = len[h * m + i] + 1;
          parent[i * m + j] = static_cast<std::uint32_t>(h);
        }
      }
      if (len[i * m + j] > len[bi * m + bj]) {
        bi = i;
        bj = j;
      }
    }
  }
  std::vector<Index> kept{points[bj]};
  std::size_t i = bi;
  std::size_t j = bj;
  for (;;) {
    kept.push_back(points[i]);
    const std::uint32_t h = parent[i * m + j];
    if (h == kNone) break;
    j = i;
    i = h;
  }
  return make_report(Property::convex_line(), f, std::move(kept));
}

DistanceReport distance_to_k_runs(const ErasedFunction& f, std::uint32_t k) {
  require_line(f);
  if (k < 1) throw PreconditionViolated("k must be at least 1");
  if (f.kind() != ValueKind::Bit) {
    throw PreconditionViolated("k-runs needs Bit values");
  }
  const auto points = f.nonerased();
  const std::size_t m = points.size();
  constexpr std::uint64_t kBig = std::numeric_limits<std::uint64_t>::max() / 4;
  // cost[t][r][b]: changes among the first t+1 points, ending in bit b with r+1
  // runs.
  auto idx = [k](std::size_t t, std::uint32_t r, int b) {
    return (t * k + r) * 2 + static_cast<std::size_t>(b);
  };
  std::vector<std::uint64_t> cost(m * k * 2, kBig);
  for (int b = 0; b < 2; ++b) {
    cost[idx(0, 0, b)] = (f.value(points[0]) != b) ? 1 : 0;
  }
  for (std::size_t t = 1; t < m; ++t) {
    const int bit = static_cast<int>(f.value(points[t]));
    for (std::uint32_t r = 0; r < k; ++r) {
      for (int b = 0; b < 2; ++b) {
        std::uint64_t best = cost[idx(t - 1, r, b)];
        if (r > 0) best = std::min(best, cost[idx(t - 1, r - 1, 1 - b)]);
        if (best < kBig) cost[idx(t, r, b)] = best + (bit != b ? 1 : 0);
      }
    }
  }
  std::uint32_t r = 0;
  int b = 0;
  for (std::uint32_t rr = 0; rr < k; ++rr) {
    for (int bb = 0; bb < 2; ++bb) {
      if (cost[idx(m - 1, rr, bb)] < cost[idx(m - 1, r, b)]) {
        r = rr;
        b = bb;
      }
    }
  }
  std::vector<Index> kept;
  for (std::size_t t = m; t-- > 0;) {
    const int bit = static_cast<int>(f.value(points[t]));
    if (bit == b) kept.push_back(points[t]);
    if (t == 0) break;
    const std::uint64_t here = cost[idx(t, r, b)] - (bit != b ? 1 : 0);
    if (cost[idx(t - 1, r, b)] != here) {
      --r;
      b = 1 - b;
    }
  }
  return make_report(Property::k_runs(k), f, std::move(kept));
}

DistanceReport distance_to_low_degree(const ErasedFunction& f,
                                      std::uint32_t deg) {
  require_line(f);
  if (f.kind() != ValueKind::Field || f.modulus() == 0) {
    throw PreconditionViolated("low-degree oracle needs field values");
  }
  const std::int64_t p = f.modulus();
  if (static_cast<std::uint64_t>(p) != f.domain().side()) {
    throw PreconditionViolated("low-degree oracle needs domain Line{p}");
  }
  if (p > 64) throw SizeLimit("low-degree oracle is limited to p <= 64");
  if (deg + 1 > p) throw PreconditionViolated("need deg + 1 <= p");
  const double count = std::pow(static_cast<double>(p), deg + 1.0);
  if (count > static_cast<double>(1 << 24)) {
    throw SizeLimit("too many polynomials to enumerate");
  }
  const auto points = f.nonerased();
  std::vector<std::int64_t> coef(deg + 1, 0);
  std::vector<std::int64_t> best_coef = coef;
  std::size_t best = 0;
  const auto total = static_cast<std::uint64_t>(count);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i <= deg; ++i) {
      coef[i] = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(p));
      c /= static_cast<std::uint64_t>(p);
    }
    std::size_t agree = 0;
    for (const Index x : points) {
      std::int64_t acc = 0;
      for (std::uint32_t i = deg + 1; i-- > 0;) {
        acc = (acc * static_cast<std::int64_t>(x) + coef[i]) % p;
      }
      if (acc == mod(static_cast<std::int64_t>(f.value(x)), p)) ++agree;
    }
    if (agree > best) {
      best = agree;
      best_coef = coef;
    }
  }
  std::vector<Index> kept;
  for (const Index x : points) {
    std::int64_t acc = 0;
    for (std::uint32_t i = deg + 1; i-- > 0;) {
      acc = (acc * static_cast<std::int64_t>(x) + best_coef[i]) % p;
    }
    if (acc == mod(static_cast<std::int64_t>(f.value(x)), p)) kept.push_back(x);
  }
  return make_report(Property::low_degree(deg), f, std::move(kept));
}

DistanceReport distance_to_monotone_grid_small(const ErasedFunction& f) {
  return small_order_distance(f, Property::monotone_grid(),
                              grid_violation(f, nullptr));
}

DistanceReport distance_to_bdp_grid_small(const ErasedFunction& f,
                                          const BoundingFamily& bounds) {
  return small_order_distance(f, Property::bdp_grid(bounds),
                              grid_violation(f, &bounds));
}

DistanceReport distance_to_monotone_grid(const ErasedFunction& f) {
  return order_distance(f, Property::monotone_grid(),
                        grid_violation(f, nullptr));
}

DistanceReport distance_to_bdp_grid(const ErasedFunction& f,
                                    const BoundingFamily& bounds) {
  if (bounds.dims() != f.domain().dims() ||
      bounds.side() != f.domain().side()) {
    throw PreconditionViolated("bounding family does not match the domain");
  }
  return order_distance(f, Property::bdp_grid(bounds),
                        grid_violation(f, &bounds));
}

DistanceReport distance_to_poset_monotone(const ErasedFunction& f,
                                          const Poset& poset) {
  if (poset.size() != f.domain().size()) {
    throw PreconditionViolated("poset size does not match the domain");
  }
  auto shared = std::make_shared<const Poset>(poset);
  return order_distance(
      f, Property::poset_monotone(shared), [&](Index x, Index y) {
        return poset.precedes(static_cast<std::uint32_t>(x),
                              static_cast<std::uint32_t>(y)) &&
               f.value(x) > f.value(y);
      });
}

DistanceReport distance(const ErasedFunction& f, const Property& property) {
  switch (property.kind) {
    case PropertyKind::MonotoneLine: return distance_to_monotone_line(f);
    case PropertyKind::BdpLine:
      return distance_to_bdp_line(f, bounds_of(property).dim(0));
    case PropertyKind::ConvexLine: return distance_to_convex_line(f);
    case PropertyKind::MonotoneGrid: return distance_to_monotone_grid(f);
    case PropertyKind::BdpGrid:
      return distance_to_bdp_grid(f, bounds_of(property));
    case PropertyKind::KRuns: return distance_to_k_runs(f, property.k);
    case PropertyKind::LowDegree:
      return distance_to_low_degree(f, property.degree);
    case PropertyKind::PosetMonotone:
      if (!property.poset) throw PreconditionViolated("property needs a poset");
      return distance_to_poset_monotone(f, *property.poset);
  }
  throw PreconditionViolated("unknown property");
}

bool is_restorable(const ErasedFunction& f, const Property& property) {
  return distance(f, property).absolute == 0;
}

AntichainResult maximum_antichain(std::uint32_t m, const OrderEdges& edges) {
  std::vector<std::vector<std::uint32_t>> adj(m);
  for (const auto& [x, y] : edges) adj[x].push_back(y);
  std::vector<std::uint32_t> match_l(m, kNone);
  std::vector<std::uint32_t> match_r(m, kNone);
  std::vector<std::uint32_t> dist(m);

  auto bfs = [&]() {
    std::queue<std::uint32_t> q;
    bool found = false;
    for (std::uint32_t u = 0; u < m; ++u) {
      if (match_l[u] == kNone) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kNone;
      }
    }
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop();
      for (const std::uint32_t v : adj[u]) {
        const std::uint32_t w = match_r[v];
        if (w == kNone) {
          found = true;
        } else if (dist[w] == kNone) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };
  std::vector<std::size_t> cursor(m);
  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t u) -> bool {
    for (std::size_t& i = cursor[u]; i < adj[u].size(); ++i) {
      const std::uint32_t v = adj[u][i];
      const std::uint32_t w = match_r[v];
      if (w == kNone || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_l[u] = v;
        match_r[v] = u;
        ++i;
        return true;
      }
    }
    dist[u] = kNone;
    return false;
  };

  AntichainResult result;
  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    for (std::uint32_t u = 0; u < m; ++u) {
      if (match_l[u] == kNone && dfs(u)) ++result.matching;
    }
  }

  // König: Z = vertices reachable from free left vertices by alternating
  // paths. The cover is (L \ Z) ∪ (R ∩ Z); the antichain is its complement.
  std::vector<char> z_left(m, 0);
  std::vector<char> z_right(m, 0);
  std::queue<std::uint32_t> q;
  for (std::uint32_t u = 0; u < m; ++u) {
    if (match_l[u] == kNone) {
      z_left[u] = 1;
      q.push(u);
    }
  }
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop();
    for (const std::uint32_t v : adj[u]) {
      if (z_right[v] || match_l[u] == v) continue;
      z_right[v] = 1;
      const std::uint32_t w = match_r[v];
      if (w != kNone && !z_left[w]) {
        z_left[w] = 1;
        q.push(w);
      }
    }
  }
  for (std::uint32_t x = 0; x < m; ++x) {
    if (z_left[x] && !z_right[x]) result.antichain.push_back(x);
  }
  return result;
}

std::uint64_t greedy_matching_size(std::uint32_t m, const OrderEdges& edges) {
  std::vector<char> used(m, 0);
  std::uint64_t size = 0;
  for (const auto& [x, y] : edges) {
    if (!used[x] && !used[y]) {
      used[x] = used[y] = 1;
      ++size;
    }
  }
  return size;
}

std::vector<std::uint32_t> minimum_vertex_cover_small(std::uint32_t m,
                                                      const OrderEdges& edges) {
  if (m > 20) throw SizeLimit("vertex cover search is limited to 20 vertices");
  std::vector<std::uint32_t> nbr(m, 0);
  for (const auto& [x, y] : edges) {
    nbr[x] |= 1U << y;
    nbr[y] |= 1U << x;
  }
  std::uint32_t best = (m == 32) ? ~0U : ((1U << m) - 1);
  std::function<void(std::uint32_t, std::uint32_t)> search =
      [&](std::uint32_t cover, std::uint32_t alive) {
        if (std::popcount(cover) >= std::popcount(best)) return;
        // highest-degree live vertex among uncovered edges
        std::uint32_t pick = kNone;
        int degree = 0;
        for (std::uint32_t v = 0; v < m; ++v) {
          if (!((alive >> v) & 1U)) continue;
          const int d = std::popcount(nbr[v] & alive);
          if (d > degree) {
            degree = d;
            pick = v;
          }
        }
        if (pick == kNone) {
          best = cover;
          return;
        }
        search(cover | (1U << pick), alive & ~(1U << pick));
        const std::uint32_t others = nbr[pick] & alive;
        if (degree > 1) {
          search(cover | others, alive & ~others & ~(1U << pick));
        }
      };
  search(0, m == 32 ? ~0U : ((1U << m) - 1));
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < m; ++v) {
    if ((best >> v) & 1U) out.push_back(v);
  }
  return out;
}

std::vector<double> complete(const ErasedFunction& f, const Property& property,
                             std::vector<Index> const& kept_in) {
  std::vector<Index> kept = kept_in;
  std::sort(kept.begin(), kept.end());
  switch (property.kind) {
    case PropertyKind::MonotoneLine:
      return complete_line_bdp(f, StepBounds::monotone(f.domain().side()), kept);
    case PropertyKind::BdpLine:
      return complete_line_bdp(f, bounds_of(property).dim(0), kept);
    case PropertyKind::ConvexLine: return complete_convex(f, kept);
    case PropertyKind::MonotoneGrid:
      return complete_grid_bdp(
          f, BoundingFamily::monotone(f.domain().side(), f.domain().dims()),
          kept);
    case PropertyKind::BdpGrid:
      return complete_grid_bdp(f, bounds_of(property), kept);
    case PropertyKind::KRuns: return complete_k_runs(f, kept);
    case PropertyKind::LowDegree: {
      std::vector<std::pair<std::int64_t, std::int64_t>> pts;
      for (const Index x : kept) {
        if (pts.size() == property.degree + 1) break;
        pts.emplace_back(static_cast<std::int64_t>(x),
                         static_cast<std::int64_t>(f.value(x)));
      }
      return interpolate_mod(pts, f.modulus());
    }
    case PropertyKind::PosetMonotone:
      if (!property.poset) throw PreconditionViolated("property needs a poset");
      return complete_poset(f, *property.poset, kept);
  }
  throw PreconditionViolated("unknown property");
}

bool is_member_total(const Domain& domain, const std::vector<double>& v,
                     const Property& property, std::int64_t modulus) {
  if (v.size() != domain.size()) return false;
  switch (property.kind) {
    case PropertyKind::MonotoneLine:
    case PropertyKind::MonotoneGrid:
      return hypergrid_bdp_member(
          domain, v, BoundingFamily::monotone(domain.side(), domain.dims()));
    case PropertyKind::BdpLine:
    case PropertyKind::BdpGrid:
      return hypergrid_bdp_member(domain, v, bounds_of(property));
    case PropertyKind::ConvexLine:
      for (std::size_t i = 0; i + 2 < v.size(); ++i) {
        const auto a = static_cast<std::uint32_t>(i);
        if (slope_greater(Secant{a, v[i], a + 1, v[i + 1]},
                          Secant{a + 1, v[i + 1], a + 2, v[i + 2]})) {
          return false;
        }
      }
      return true;
    case PropertyKind::KRuns: {
      std::uint32_t alternations = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] != v[i - 1]) ++alternations;
      }
      return alternations + 1 <= property.k;
    }
    case PropertyKind::LowDegree: {
      std::vector<std::pair<std::int64_t, std::int64_t>> pts;
      for (std::size_t x = 0; x < v.size(); ++x) {
        pts.emplace_back(static_cast<std::int64_t>(x),
                         static_cast<std::int64_t>(v[x]));
      }
      return fits_low_degree(pts, property.degree, modulus);
    }
    case PropertyKind::PosetMonotone: {
      const Poset& poset = *property.poset;
      for (std::uint32_t x = 0; x < poset.size(); ++x) {
        for (std::uint32_t y = 0; y < poset.size(); ++y) {
          if (poset.precedes(x, y) && v[x] > v[y]) return false;
        }
      }
      return true;
    }
  }
  return false;
}

bool validate_report(const ErasedFunction& f, const Property& property,
                     const DistanceReport& report, std::string* why) {
  auto fail = [why](const char* reason) {
    if (why) *why = reason;
    return false;
  };
  if (report.total != f.nonerased_count()) return fail("wrong |N|");
  if (report.kept.size() + report.absolute != report.total) {
    return fail("kept size does not match the distance");
  }
  if (report.relative != Rational(static_cast<std::int64_t>(report.absolute),
                                  static_cast<std::int64_t>(report.total))) {
    return fail("relative distance is not absolute / |N|");
  }
  for (std::size_t i = 0; i < report.kept.size(); ++i) {
    const Index x = report.kept[i];
    if (x >= f.domain().size() || f.is_erased(x)) {
      return fail("kept point is erased or out of range");
    }
    if (i > 0 && report.kept[i - 1] >= x) return fail("kept set not sorted");
  }
  const std::vector<double> g = complete(f, property, report.kept);
  for (const Index x : report.kept) {
    if (g[x] != f.value(x)) return fail("completion disagrees on kept");
  }
  if (!is_member_total(f.domain(), g, property, f.modulus())) {
    return fail("completion is not a member");
  }
  return true;
}

bool validate_certificate(const ErasedFunction& f, const Property& property,
                          const Certificate& cert) {
  for (const Index x : cert.points) {
    if (x >= f.domain().size() || f.is_erased(x)) return false;
  }
  const Domain& domain = f.domain();
  switch (cert.kind) {
    case Certificate::Kind::None: return false;
    case Certificate::Kind::ViolatedPair: {
      if (cert.points.size() != 2) return false;
      const Index x = cert.points[0];
      const Index y = cert.points[1];
      switch (property.kind) {
        case PropertyKind::MonotoneLine:
        case PropertyKind::MonotoneGrid:
          return (domain.precedes_or_equal(x, y) && f.value(x) > f.value(y)) ||
                 (domain.precedes_or_equal(y, x) && f.value(y) > f.value(x));
        case PropertyKind::BdpLine:
        case PropertyKind::BdpGrid:
          return violates_bdp(bounds_of(property), domain, x, f.value(x), y,
                              f.value(y));
        case PropertyKind::PosetMonotone: {
          const auto a = static_cast<std::uint32_t>(x);
          const auto b = static_cast<std::uint32_t>(y);
          return (property.poset->precedes(a, b) && f.value(x) > f.value(y)) ||
                 (property.poset->precedes(b, a) && f.value(y) > f.value(x));
        }
        default: return false;
      }
    }
    case Certificate::Kind::SlopeChain: {
      if (property.kind != PropertyKind::ConvexLine || cert.points.size() != 4) {
        return false;
      }
      const auto& p = cert.points;
      if (!(p[0] < p[1] && p[1] <= p[2] && p[2] < p[3])) return false;
      auto s = [&](Index a, Index b) {
        return Secant{static_cast<std::uint32_t>(a), f.value(a),
                      static_cast<std::uint32_t>(b), f.value(b)};
      };
      return slope_greater(s(p[0], p[1]), s(p[2], p[3]));
    }
    case Certificate::Kind::Sample: {
      LabeledSample sample;
      for (const Index x : cert.points) sample.push_back({x, f.at(x)});
      switch (property.kind) {
        case PropertyKind::KRuns:
          return count_alternations(sample) >= property.k;
        case PropertyKind::LowDegree: {
          std::vector<std::pair<std::int64_t, std::int64_t>> pts;
          for (const auto& s : sample) {
            pts.emplace_back(static_cast<std::int64_t>(s.point),
                             s.value.as_int());
          }
          std::sort(pts.begin(), pts.end());
          pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
          return !fits_low_degree(pts, property.degree, f.modulus());
        }
        case PropertyKind::PosetMonotone:
          return !poset_monotone_uniform_spec(property.poset).decide(sample);
        default: return false;
      }
    }
  }
  return false;
}

}  // namespace ert
