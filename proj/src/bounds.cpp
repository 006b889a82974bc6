#include "ert/bounds.hpp"

#include <cmath>

#include "ert/errors.hpp"
#include "ert/numeric.hpp"

namespace ert {

StepBounds::StepBounds(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw PreconditionViolated("bound rows differ in length");
  }
  const std::size_t steps = lower_.size();
  lower_prefix_.assign(steps + 1, 0.0L);
  upper_prefix_.assign(steps + 1, 0.0L);
  lower_inf_.assign(steps + 1, 0);
  upper_inf_.assign(steps + 1, 0);
  for (std::size_t t = 0; t < steps; ++t) {
    const double l = lower_[t];
    const double u = upper_[t];
    if (std::isnan(l) || std::isnan(u) || l == kInf || u == -kInf) {
      throw PreconditionViolated("bounds must satisfy l < +inf and u > -inf");
    }
    if (!(l < u)) throw PreconditionViolated("bounding family needs l < u");
    lower_inf_[t + 1] = lower_inf_[t] + (std::isinf(l) ? 1 : 0);
    upper_inf_[t + 1] = upper_inf_[t] + (std::isinf(u) ? 1 : 0);
    lower_prefix_[t + 1] = lower_prefix_[t] + (std::isinf(l) ? 0.0L : l);
    upper_prefix_[t + 1] = upper_prefix_[t] + (std::isinf(u) ? 0.0L : u);
  }
}

StepBounds StepBounds::monotone(std::uint64_t n) {
  return constant(n, 0.0, kInf);
}

StepBounds StepBounds::lipschitz(std::uint64_t n, double c) {
  return constant(n, -c, c);
}

StepBounds StepBounds::constant(std::uint64_t n, double lower, double upper) {
  const std::size_t steps = n > 0 ? n - 1 : 0;
  return StepBounds(std::vector<double>(steps, lower),
                    std::vector<double>(steps, upper));
}

double StepBounds::lower_sum(std::uint64_t a, std::uint64_t b) const {
  if (lower_inf_[b] != lower_inf_[a]) return -kInf;
  return static_cast<double>(lower_prefix_[b] - lower_prefix_[a]);
}

double StepBounds::upper_sum(std::uint64_t a, std::uint64_t b) const {
  if (upper_inf_[b] != upper_inf_[a]) return kInf;
  return static_cast<double>(upper_prefix_[b] - upper_prefix_[a]);
}

bool StepBounds::is_monotone() const {
  for (std::size_t t = 0; t < lower_.size(); ++t) {
    if (lower_[t] != 0.0 || upper_[t] != kInf) return false;
  }
  return true;
}

BoundingFamily::BoundingFamily(std::vector<StepBounds> per_dim)
    : per_dim_(std::move(per_dim)) {
  if (per_dim_.empty()) throw PreconditionViolated("bounding family is empty");
  for (const auto& b : per_dim_) {
    if (b.side() != per_dim_[0].side()) {
      throw PreconditionViolated("bounding family dimensions disagree on n");
    }
  }
}

BoundingFamily BoundingFamily::uniform(std::uint32_t d,
                                       const StepBounds& bounds) {
  return BoundingFamily(std::vector<StepBounds>(d, bounds));
}

bool BoundingFamily::is_monotone() const {
  for (const auto& b : per_dim_) {
    if (!b.is_monotone()) return false;
  }
  return true;
}

double quasi_metric(const BoundingFamily& bounds, const Domain& domain,
                    Index x, Index y) {
  double m = 0.0;
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    const std::uint32_t xr = domain.coord(x, r);
    const std::uint32_t yr = domain.coord(y, r);
    if (xr > yr) {
      m += bounds.dim(r).upper_sum(yr, xr);
    } else if (xr < yr) {
      m -= bounds.dim(r).lower_sum(xr, yr);
    }
    if (m == kInf) return kInf;
  }
  return m;
}

bool violates_directed(double fx, double fy, double m) {
  if (m == kInf) return false;
  return definitely_greater(fx - fy, m);
}

bool violates_bdp(const BoundingFamily& bounds, const Domain& domain, Index x,
                  double fx, Index y, double fy) {
  return violates_directed(fx, fy, quasi_metric(bounds, domain, x, y)) ||
         violates_directed(fy, fx, quasi_metric(bounds, domain, y, x));
}

bool violates_bdp_line(const StepBounds& bounds, std::uint64_t x, double fx,
                       std::uint64_t y, double fy) {
  if (x > y) return violates_bdp_line(bounds, y, fy, x, fx);
  return violates_directed(fx, fy, -bounds.lower_sum(x, y)) ||
         violates_directed(fy, fx, bounds.upper_sum(x, y));
}

bool is_member_bdp(const ErasedFunction& f, const BoundingFamily& bounds) {
  const Domain& domain = f.domain();
  const auto points = f.nonerased();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (violates_bdp(bounds, domain, points[i], f.value(points[i]),
                       points[j], f.value(points[j]))) {
        return false;
      }
    }
  }
  return true;
}

bool is_member_bdp_edges(const ErasedFunction& f,
                         const BoundingFamily& bounds) {
  if (f.erased_count() != 0) {
    throw PreconditionViolated("edge characterization needs a total function");
  }
  const Domain& domain = f.domain();
  for (Index x = 0; x < domain.size(); ++x) {
    for (std::uint32_t r = 0; r < domain.dims(); ++r) {
      const std::uint32_t xr = domain.coord(x, r);
      if (xr + 1 >= domain.side()) continue;
      const double step = f.value(x + domain.stride(r)) - f.value(x);
      if (definitely_greater(bounds.dim(r).lower(xr), step) ||
          definitely_greater(step, bounds.dim(r).upper(xr))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace ert
