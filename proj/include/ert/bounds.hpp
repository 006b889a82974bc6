#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "ert/domain.hpp"

namespace ert {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Derivative bounds along one axis: step t (from coordinate t to t+1,
/// 0-based, t in [0, n-2]) must change f by an amount in [lower[t], upper[t]].
/// lower may be -inf and upper may be +inf; lower[t] < upper[t] always.
///
/// On a line this is the bounding pair (l, u).
class StepBounds {
 public:
  StepBounds(std::vector<double> lower, std::vector<double> upper);

  static StepBounds monotone(std::uint64_t n);
  static StepBounds lipschitz(std::uint64_t n, double c);
  static StepBounds constant(std::uint64_t n, double lower, double upper);

  [[nodiscard]] std::uint64_t side() const { return lower_.size() + 1; }
  [[nodiscard]] double lower(std::uint64_t t) const { return lower_[t]; }
  [[nodiscard]] double upper(std::uint64_t t) const { return upper_[t]; }
  [[nodiscard]] const std::vector<double>& lower_steps() const {
    return lower_;
  }
  [[nodiscard]] const std::vector<double>& upper_steps() const {
    return upper_;
  }

  /// Sum of lower[t] for a <= t < b (a <= b); -inf if any term is.
  [[nodiscard]] double lower_sum(std::uint64_t a, std::uint64_t b) const;
  /// Sum of upper[t] for a <= t < b; +inf if any term is.
  [[nodiscard]] double upper_sum(std::uint64_t a, std::uint64_t b) const;

  [[nodiscard]] bool all_finite() const {
    return lower_inf_.back() == 0 && upper_inf_.back() == 0;
  }
  /// l == 0 and u == +inf everywhere.
  [[nodiscard]] bool is_monotone() const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  // Prefix sums of the finite terms and prefix counts of infinite terms.
  std::vector<long double> lower_prefix_;
  std::vector<long double> upper_prefix_;
  std::vector<std::uint32_t> lower_inf_;
  std::vector<std::uint32_t> upper_inf_;
};

/// The 2d functions l_r, u_r defining a bounded-derivative property on
/// [n]^d.
class BoundingFamily {
 public:
  explicit BoundingFamily(std::vector<StepBounds> per_dim);

  static BoundingFamily uniform(std::uint32_t d, const StepBounds& bounds);
  static BoundingFamily monotone(std::uint64_t n, std::uint32_t d) {
    return uniform(d, StepBounds::monotone(n));
  }
  static BoundingFamily lipschitz(std::uint64_t n, std::uint32_t d, double c) {
    return uniform(d, StepBounds::lipschitz(n, c));
  }

  [[nodiscard]] std::uint32_t dims() const {
    return static_cast<std::uint32_t>(per_dim_.size());
  }
  [[nodiscard]] std::uint64_t side() const { return per_dim_[0].side(); }
  [[nodiscard]] const StepBounds& dim(std::uint32_t r) const {
    return per_dim_[r];
  }
  [[nodiscard]] bool is_monotone() const;

 private:
  std::vector<StepBounds> per_dim_;
};

/// m_B(x, y): the largest value f(x) - f(y) may take for f in P(B).
/// Sums u_r over coordinates where x is above y and subtracts the l_r sums
/// where x is below y. Lies in R ∪ {+inf}; m_B(x, x) = 0.
double quasi_metric(const BoundingFamily& bounds, const Domain& domain,
                    Index x, Index y);

/// Directed violation: fx - fy > m (beyond tolerance).
bool violates_directed(double fx, double fy, double m);

/// Does the pair (x, y) violate P(B)? Checks both directions.
bool violates_bdp(const BoundingFamily& bounds, const Domain& domain, Index x,
                  double fx, Index y, double fy);

/// Line form: x < y positions.
bool violates_bdp_line(const StepBounds& bounds, std::uint64_t x, double fx,
                       std::uint64_t y, double fy);

/// Pairwise characterization over all nonerased ordered pairs.
bool is_member_bdp(const ErasedFunction& f, const BoundingFamily& bounds);

/// Per-edge derivative condition l_r(x_r) <= f(x + e_r) - f(x) <= u_r(x_r);
/// f must be total.
bool is_member_bdp_edges(const ErasedFunction& f,
                         const BoundingFamily& bounds);

}  // namespace ert
