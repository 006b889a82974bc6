#include "ert/hypergrid_testers.hpp"

#include "ert/errors.hpp"
#include "ert/line_testers.hpp"
#include "ert/numeric.hpp"

namespace ert {
namespace {

void require_params(double eps, double alpha, double limit) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionViolated("eps must lie in (0, 1)");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in [0, 1)");
  }
  if (alpha > limit) {
    throw PreconditionViolated("alpha exceeds the tester's erasure limit");
  }
}

std::uint64_t reduction_iterations(double c, std::uint32_t d, double eps,
                                   double alpha) {
  const double denom = eps * (1.0 - alpha) - 4.0 * d * alpha;
  if (!(denom > 0.0)) {
    throw PreconditionViolated("eps(1-alpha) must exceed 4 d alpha");
  }
  return ceil_count(c * d / denom);
}

// Shared loop: `checks_for(line)` returns the pair checks for that line.
template <class ChecksFor>
Verdict run_reduction(QueryOracle& oracle, std::uint64_t iterations, Rng& rng,
                      ChecksFor&& checks_for) {
  const Domain& domain = oracle.domain();
  try {
    for (std::uint64_t it = 0; it < iterations; ++it) {
      const AxisLine axis = sample_axis_line(domain, rng);
      const PairCheck& check = checks_for(axis);
      LineAccess line(oracle, axis);
      const auto s = line.sample_nonerased(0, line.size() - 1, rng);
      if (auto pair =
              randomized_binary_search(line, s.pos, s.value, rng, check)) {
        return Verdict::reject(
            Certificate{Certificate::Kind::ViolatedPair,
                        {line.point(pair->first), line.point(pair->second)}},
            oracle.count());
      }
    }
  } catch (const BudgetExhausted&) {
    return Verdict::accept(Reason::BudgetExhausted, oracle.count());
  }
  return Verdict::accept(Reason::AllChecksPassed, oracle.count());
}

}  // namespace

AxisLine sample_axis_line(const Domain& domain, Rng& rng) {
  return axis_line_from_ordinal(domain,
                                rng.uniform_below(axis_line_count(domain)));
}

std::uint64_t monotone_hypergrid_budget(std::uint64_t n, std::uint32_t d,
                                        double eps, double alpha) {
  return std::max<std::uint64_t>(
      1, ceil_count(1200.0 * d * log2n(n) / (eps * (1.0 - alpha))));
}

std::uint64_t monotone_hypergrid_iterations(std::uint32_t d, double eps,
                                            double alpha) {
  return reduction_iterations(12.0, d, eps, alpha);
}

double monotone_hypergrid_alpha_limit(std::uint32_t d, double eps) {
  return eps / (250.0 * d);
}

std::uint64_t bdp_hypergrid_budget(std::uint64_t n, std::uint32_t d,
                                   double eps, double alpha) {
  return std::max<std::uint64_t>(
      1, ceil_count(4800.0 * d * log2n(n) / (eps * (1.0 - alpha))));
}

std::uint64_t bdp_hypergrid_iterations(std::uint32_t d, double eps,
                                       double alpha) {
  return reduction_iterations(48.0, d, eps, alpha);
}

double bdp_hypergrid_alpha_limit(std::uint32_t d, double eps) {
  return eps / (970.0 * d);
}

Verdict test_monotone_hypergrid(QueryOracle& oracle, double eps, double alpha,
                                Rng& rng) {
  const Domain& domain = oracle.domain();
  require_params(eps, alpha, monotone_hypergrid_alpha_limit(domain.dims(), eps));
  oracle.set_budget(
      monotone_hypergrid_budget(domain.side(), domain.dims(), eps, alpha));
  const std::uint64_t iterations =
      monotone_hypergrid_iterations(domain.dims(), eps, alpha);
  const PairCheck check = monotone_pair_violated;
  return run_reduction(oracle, iterations, rng,
                       [&](const AxisLine&) -> const PairCheck& { return check; });
}

Verdict test_bdp_hypergrid(QueryOracle& oracle, const BoundingFamily& bounds,
                           double eps, double alpha, Rng& rng) {
  const Domain& domain = oracle.domain();
  if (bounds.dims() != domain.dims() || bounds.side() != domain.side()) {
    throw PreconditionViolated("bounding family does not match the domain");
  }
  require_params(eps, alpha, bdp_hypergrid_alpha_limit(domain.dims(), eps));
  oracle.set_budget(
      bdp_hypergrid_budget(domain.side(), domain.dims(), eps, alpha));
  const std::uint64_t iterations =
      bdp_hypergrid_iterations(domain.dims(), eps, alpha);

  std::vector<PairCheck> per_dim;
  per_dim.reserve(domain.dims());
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    if (bounds.dim(r).is_monotone()) {
      per_dim.emplace_back(monotone_pair_violated);
      continue;
    }
    auto [g, h] = bdp_view_checks(bounds.dim(r));
    per_dim.emplace_back([g = std::move(g), h = std::move(h)](
                             std::uint32_t lo, double f_lo, std::uint32_t hi,
                             double f_hi) {
      return g(lo, f_lo, hi, f_hi) || h(lo, f_lo, hi, f_hi);
    });
  }
  return run_reduction(oracle, iterations, rng, [&](const AxisLine& axis) -> const PairCheck& {
    return per_dim[axis.dim];
  });
}

}  // namespace ert
