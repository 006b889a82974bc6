#include "ert/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <numeric>

#include "ert/errors.hpp"
#include "ert/numeric.hpp"
#include "ert/transforms.hpp"

namespace ert {
namespace {

double largest_finite_bound(const BoundingFamily& b) {
  double m = 0.0;
  for (std::uint32_t r = 0; r < b.dims(); ++r) {
    for (const double x : b.dim(r).lower_steps()) {
      if (std::isfinite(x)) m = std::max(m, std::fabs(x));
    }
    for (const double x : b.dim(r).upper_steps()) {
      if (std::isfinite(x)) m = std::max(m, std::fabs(x));
    }
  }
  return m;
}

// Step drawn inside [l, u] (or near the finite side of a half-line).
double draw_step(double l, double u, Rng& rng) {
  const double t = rng.uniform01();
  if (std::isfinite(l) && std::isfinite(u)) return l + (u - l) * t;
  if (std::isfinite(l)) return l + 3.0 * t;
  if (std::isfinite(u)) return u - 3.0 * t;
  return 6.0 * t - 3.0;
}

ErasedFunction apply_erasure(const ErasedFunction& f, double alpha,
                             ErasureStrategy erasure, Rng& rng) {
  switch (erasure) {
    case ErasureStrategy::None: return f;
    case ErasureStrategy::Random: return erase_random(f, alpha, rng);
    case ErasureStrategy::BinarySearchPivots:
      return erase_binary_search_pivots(f, alpha);
  }
  return f;
}

ValueKind kind_for(const Property& p) {
  switch (p.kind) {
    case PropertyKind::KRuns: return ValueKind::Bit;
    case PropertyKind::LowDegree: return ValueKind::Field;
    default: return ValueKind::Real;
  }
}

// Sum of coordinates.
std::uint64_t weight(const Domain& domain, Index x) {
  std::uint64_t w = 0;
  for (std::uint32_t r = 0; r < domain.dims(); ++r) w += domain.coord(x, r);
  return w;
}

}  // namespace

ErasedFunction make_total(const Domain& domain, const std::vector<double>& v,
                          ValueKind kind, std::int64_t modulus) {
  std::vector<PointValue> values;
  values.reserve(v.size());
  for (const double x : v) {
    switch (kind) {
      case ValueKind::Real: values.push_back(PointValue::real(x)); break;
      case ValueKind::Bit: values.push_back(PointValue::bit(x != 0.0)); break;
      case ValueKind::Field:
        values.push_back(PointValue::field(static_cast<std::int64_t>(x)));
        break;
    }
  }
  ErasedFunction f(domain, std::move(values));
  return kind == ValueKind::Field ? f.with_modulus(modulus) : f;
}

ErasedFunction erase_points(const ErasedFunction& f,
                            const std::vector<Index>& points) {
  std::vector<PointValue> values;
  values.reserve(f.domain().size());
  for (Index i = 0; i < f.domain().size(); ++i) values.push_back(f.at(i));
  for (const Index p : points) values.at(p) = PointValue::erased();
  ErasedFunction out(f.domain(), std::move(values));
  return f.kind() == ValueKind::Field ? out.with_modulus(f.modulus()) : out;
}

ErasedFunction erase_random(const ErasedFunction& f, double alpha, Rng& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in [0, 1)");
  }
  const std::uint64_t size = f.domain().size();
  const std::uint64_t count = floor_count(alpha * static_cast<double>(size));
  // Partial Fisher-Yates over the point indices.
  std::vector<Index> perm(size);
  std::iota(perm.begin(), perm.end(), Index{0});
  for (std::uint64_t i = 0; i < count; ++i) {
    std::swap(perm[i], perm[i + rng.uniform_below(size - i)]);
  }
  perm.resize(count);
  return erase_points(f, perm);
}

std::vector<Index> binary_search_pivot_order(std::uint64_t n) {
  std::vector<Index> order;
  std::deque<std::pair<std::uint64_t, std::uint64_t>> queue{{0, n - 1}};
  while (!queue.empty()) {
    const auto [lo, hi] = queue.front();
    queue.pop_front();
    const std::uint64_t m = lo + (hi - lo) / 2;
    order.push_back(m);
    if (m > lo) queue.emplace_back(lo, m - 1);
    if (m < hi) queue.emplace_back(m + 1, hi);
  }
  return order;
}

ErasedFunction erase_binary_search_pivots(const ErasedFunction& f,
                                          double alpha) {
  if (!f.domain().is_line()) {
    throw PreconditionViolated("pivot erasure needs a line");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in (0, 1)");
  }
  const std::uint64_t n = f.domain().side();
  auto order = binary_search_pivot_order(n);
  order.resize(floor_count(alpha * static_cast<double>(n)));
  return erase_points(f, order);
}

ErasedFunction hypercube_middle_layer(std::uint32_t d) {
  if (d == 0 || d % 2 != 0) {
    throw PreconditionViolated("middle layer needs an even dimension");
  }
  const Domain domain = Domain::hypercube(d);
  std::vector<PointValue> values;
  values.reserve(domain.size());
  for (Index x = 0; x < domain.size(); ++x) {
    const auto w = static_cast<std::uint32_t>(std::popcount(x));
    if (w == d / 2) {
      values.push_back(PointValue::erased());
    } else {
      values.push_back(PointValue::real(w < d / 2 ? 1.0 : 0.0));
    }
  }
  return ErasedFunction(domain, std::move(values));
}

ErasureStrategy erasure_strategy_from_tag(const std::string& tag) {
  if (tag == "none") return ErasureStrategy::None;
  if (tag == "random") return ErasureStrategy::Random;
  if (tag == "pivots") return ErasureStrategy::BinarySearchPivots;
  throw ConfigError("unknown erasure strategy: " + tag);
}

const char* to_string(ErasureStrategy s) {
  switch (s) {
    case ErasureStrategy::None: return "none";
    case ErasureStrategy::Random: return "random";
    case ErasureStrategy::BinarySearchPivots: return "pivots";
  }
  return "?";
}

Domain instance_domain(const Property& property, std::uint64_t n,
                       std::uint32_t d) {
  switch (property.kind) {
    case PropertyKind::MonotoneGrid:
    case PropertyKind::BdpGrid:
      return Domain::grid(n, d);
    case PropertyKind::PosetMonotone:
      if (!property.poset) throw ConfigError("poset property needs a poset");
      return Domain::line(property.poset->size());
    default:
      return Domain::line(n);
  }
}

ErasedFunction far_template(const Property& property, const Domain& domain,
                            int variant, Rng& rng) {
  const std::uint64_t size = domain.size();
  const double n = static_cast<double>(domain.side());
  std::vector<double> v(size, 0.0);
  // Perturbations must not create members, so they stay small and integer.
  auto noise = [&]() {
    return variant == 0 ? 0.0 : static_cast<double>(rng.uniform_below(2));
  };
  switch (property.kind) {
    case PropertyKind::MonotoneLine:
      for (Index i = 0; i < size; ++i) v[i] = 2.0 * (n - i) + noise();
      break;
    case PropertyKind::BdpLine:
    case PropertyKind::BdpGrid: {
      const double a = 10.0 + 2.0 * largest_finite_bound(*property.bounds);
      for (Index x = 0; x < size; ++x) {
        v[x] = a * static_cast<double>(weight(domain, x) % 2);
      }
      break;
    }
    case PropertyKind::ConvexLine: {
      const double c = (n - 1.0) / 2.0;
      for (Index i = 0; i < size; ++i) {
        const double t = static_cast<double>(i) - c;
        v[i] = -t * t - noise();
      }
      break;
    }
    case PropertyKind::MonotoneGrid:
      for (Index x = 0; x < size; ++x) {
        v[x] = -2.0 * static_cast<double>(weight(domain, x)) - noise();
      }
      break;
    case PropertyKind::KRuns:
      for (Index i = 0; i < size; ++i) {
        v[i] = static_cast<double>((i + static_cast<Index>(variant)) % 2);
      }
      break;
    case PropertyKind::LowDegree: {
      const auto p = static_cast<std::int64_t>(domain.side());
      const std::int64_t shift = variant == 0 ? 0 : static_cast<std::int64_t>(rng.uniform_below(domain.side()));
      for (Index x = 0; x < size; ++x) {
        std::int64_t acc = 1;
        for (std::uint32_t i = 0; i <= property.degree; ++i) {
          acc = acc * ((static_cast<std::int64_t>(x) + shift) % p) % p;
        }
        v[x] = static_cast<double>(acc);
      }
      return make_total(domain, v, ValueKind::Field, p);
    }
    case PropertyKind::PosetMonotone: {
      const Poset& poset = *property.poset;
      for (std::uint32_t y = 0; y < poset.size(); ++y) {
        double below = 0.0;
        for (std::uint32_t x = 0; x < poset.size(); ++x) {
          if (poset.precedes(x, y)) below += 1.0;
        }
        v[y] = -below;
      }
      break;
    }
  }
  return make_total(domain, v, kind_for(property));
}

Instance generate_far_instance(const Property& property, const Domain& domain,
                               double eps, double alpha,
                               ErasureStrategy erasure, Rng& rng,
                               int max_attempts) {
  Rational best(0);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const ErasedFunction total = far_template(property, domain, attempt, rng);
    ErasedFunction f = apply_erasure(total, alpha, erasure, rng);
    DistanceReport report = distance(f, property);
    if (report.relative.to_double() >= eps - 1e-12) {
      return Instance{std::move(f), std::move(report)};
    }
    best = std::max(best, report.relative);
  }
  throw GenerationFailed("no template reached relative distance " +
                         std::to_string(eps) + " (best " + best.str() + ")");
}

ErasedFunction generate_member_instance(const Property& property,
                                        const Domain& domain, double alpha,
                                        ErasureStrategy erasure, Rng& rng) {
  const std::uint64_t size = domain.size();
  std::vector<double> v(size, 0.0);
  switch (property.kind) {
    case PropertyKind::MonotoneLine: {
      double acc = 0.0;
      for (Index i = 0; i < size; ++i) {
        acc += static_cast<double>(rng.uniform_below(4));
        v[i] = acc;
      }
      break;
    }
    case PropertyKind::ConvexLine: {
      double slope = -static_cast<double>(rng.uniform_below(6));
      double acc = static_cast<double>(rng.uniform_below(10));
      for (Index i = 0; i < size; ++i) {
        v[i] = acc;
        acc += slope;
        slope += static_cast<double>(rng.uniform_below(3));
      }
      break;
    }
    case PropertyKind::MonotoneGrid:
    case PropertyKind::BdpLine:
    case PropertyKind::BdpGrid: {
      // Separable member: f(x) = sum_r g_r(x_r) with every step of g_r inside
      // [l_r, u_r].
      const BoundingFamily bounds =
          property.kind == PropertyKind::MonotoneGrid
              ? BoundingFamily::monotone(domain.side(), domain.dims())
              : *property.bounds;
      std::vector<std::vector<double>> g(domain.dims());
      for (std::uint32_t r = 0; r < domain.dims(); ++r) {
        g[r].assign(domain.side(), 0.0);
        for (std::uint64_t t = 0; t + 1 < domain.side(); ++t) {
          double step = draw_step(bounds.dim(r).lower(t), bounds.dim(r).upper(t), rng);
          if (property.kind == PropertyKind::MonotoneGrid) {
            step = std::floor(step);
          }
          g[r][t + 1] = g[r][t] + step;
        }
      }
      for (Index x = 0; x < size; ++x) {
        for (std::uint32_t r = 0; r < domain.dims(); ++r) {
          v[x] += g[r][domain.coord(x, r)];
        }
      }
      break;
    }
    case PropertyKind::KRuns: {
      const std::uint32_t runs =
          1 + static_cast<std::uint32_t>(rng.uniform_below(property.k));
      std::vector<Index> cuts;
      for (std::uint32_t i = 1; i < runs; ++i) {
        cuts.push_back(rng.uniform_below(size));
      }
      std::sort(cuts.begin(), cuts.end());
      int bit = static_cast<int>(rng.uniform_below(2));
      std::size_t next = 0;
      for (Index i = 0; i < size; ++i) {
        while (next < cuts.size() && cuts[next] == i) {
          bit = 1 - bit;
          ++next;
        }
        v[i] = bit;
      }
      break;
    }
    case PropertyKind::LowDegree: {
      const auto p = static_cast<std::int64_t>(domain.side());
      std::vector<std::int64_t> coef(property.degree + 1);
      for (auto& c : coef) {
        c = static_cast<std::int64_t>(rng.uniform_below(domain.side()));
      }
      for (Index x = 0; x < size; ++x) {
        std::int64_t acc = 0;
        for (std::uint32_t i = property.degree + 1; i-- > 0;) {
          acc = (acc * static_cast<std::int64_t>(x) + coef[i]) % p;
        }
        v[x] = static_cast<double>(acc);
      }
      ErasedFunction f = apply_erasure(make_total(domain, v, ValueKind::Field, p),
                                       alpha, erasure, rng);
      if (!is_restorable(f, property)) {
        throw GenerationFailed("member generator produced a non-member");
      }
      return f;
    }
    case PropertyKind::PosetMonotone: {
      const Poset& poset = *property.poset;
      std::vector<double> w(poset.size());
      for (auto& x : w) x = static_cast<double>(rng.uniform_below(3));
      for (std::uint32_t y = 0; y < poset.size(); ++y) {
        for (std::uint32_t x = 0; x < poset.size(); ++x) {
          if (poset.precedes(x, y)) v[y] += w[x];
        }
      }
      break;
    }
  }
  ErasedFunction f = apply_erasure(make_total(domain, v, kind_for(property)),
                                   alpha, erasure, rng);
  if (!is_restorable(f, property)) {
    throw GenerationFailed("member generator produced a non-member");
  }
  return f;
}

Instance generate_instance(const InstanceSpec& spec) {
  Rng rng(spec.seed);
  const Domain domain = instance_domain(spec.property, spec.n, spec.d);
  if (spec.member) {
    ErasedFunction f = generate_member_instance(spec.property, domain,
                                                spec.alpha, spec.erasure, rng);
    DistanceReport report = distance(f, spec.property);
    return Instance{std::move(f), std::move(report)};
  }
  return generate_far_instance(spec.property, domain, spec.eps, spec.alpha,
                               spec.erasure, rng);
}

}  // namespace ert
