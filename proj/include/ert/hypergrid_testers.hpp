#pragma once

#include <cstdint>

#include "ert/bounds.hpp"
#include "ert/oracle.hpp"
#include "ert/rng.hpp"

namespace ert {

/// Uniform over the d * n^(d-1) axis-parallel lines.
AxisLine sample_axis_line(const Domain& domain, Rng& rng);

std::uint64_t monotone_hypergrid_budget(std::uint64_t n, std::uint32_t d,
                                        double eps, double alpha);
std::uint64_t monotone_hypergrid_iterations(std::uint32_t d, double eps,
                                            double alpha);
/// Largest alpha the monotonicity tester accepts: eps / (250 d).
double monotone_hypergrid_alpha_limit(std::uint32_t d, double eps);

std::uint64_t bdp_hypergrid_budget(std::uint64_t n, std::uint32_t d,
                                   double eps, double alpha);
std::uint64_t bdp_hypergrid_iterations(std::uint32_t d, double eps,
                                       double alpha);
/// eps / (970 d).
double bdp_hypergrid_alpha_limit(std::uint32_t d, double eps);

/// Dimension-reduction monotonicity tester on [n]^d. Throws
/// PreconditionViolated (before any query) if alpha exceeds the limit.
Verdict test_monotone_hypergrid(QueryOracle& oracle, double eps, double alpha,
                                Rng& rng);

/// Dimension-reduction tester for the BDP given by `bounds`. Every
/// iteration runs one randomized binary search on a random axis line and
/// checks each pivot against both the g and h views of that line.
Verdict test_bdp_hypergrid(QueryOracle& oracle, const BoundingFamily& bounds,
                           double eps, double alpha, Rng& rng);

}  // namespace ert
