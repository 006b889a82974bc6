#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ert/oracle.hpp"
#include "ert/rng.hpp"

namespace ert {

/// A queried point and its (nonerased) value.
using LabeledSample = std::vector<QueriedPoint>;

/// Proximity-oblivious tester as data. decide returns true to accept.
struct POTSpec {
  std::uint32_t q = 0;
  double c = 1.0;
  std::function<double(double)> rho;
  std::function<bool(const LabeledSample&)> decide;
};

/// rho is nondecreasing on a grid of `steps` points in (0, 1].
bool rho_is_monotone(const POTSpec& pot, int steps = 1000);

/// rho(eps_f (1 - alpha)) - alpha q: detection rate of the transformed POT.
double pot_detection_bound(const POTSpec& pot, double eps_f, double alpha);

/// One run of the transformed POT: q uniform points; accept if any is erased,
/// otherwise defer to pot.decide.
Verdict erasure_resilient_pot_run(const POTSpec& pot, QueryOracle& oracle,
                                  Rng& rng);

/// ceil(ln 3 / detection_lower_bound).
std::uint64_t pot_repetitions(double detection_lower_bound);

/// Independent repetitions of the transformed POT; Reject if any run
/// rejects.
Verdict pot_amplify(const POTSpec& pot, double alpha,
                    double detection_lower_bound, QueryOracle& oracle,
                    Rng& rng);

bool is_prime(std::int64_t p);

/// True if some polynomial of degree <= deg over GF(p) passes through all
/// (x, y) pairs. x values must be distinct.
bool fits_low_degree(const std::vector<std::pair<std::int64_t, std::int64_t>>& pts,
                     std::uint32_t deg, std::int64_t p);

/// Low-degree POT on functions GF(p) -> GF(p) (domain Line{p}, point i is
/// the field element i): q = deg + 2 uniform points, deduplicated, then a
/// degree-<=deg fit check. Throws InvalidField if p is not prime.
POTSpec low_degree_pot(std::int64_t p, std::uint32_t deg);

/// Tester that only looks at a uniform sample and its labels.
/// q(domain size, eps) is the sample size; decide returns true to accept.
struct UniformTesterSpec {
  std::function<std::uint64_t(std::uint64_t, double)> q;
  std::function<bool(const LabeledSample&)> decide;
};

/// Number of draws ceil(2 q / (1 - alpha)) and repetitions (3 when q < 8).
std::uint64_t extendable_draws(std::uint64_t q, double alpha);
std::uint32_t extendable_repetitions(std::uint64_t q);

/// Erasure-resilient wrapper for a uniform tester of an extendable
/// property. Accepts a repetition when it sees fewer than q nonerased
/// points; otherwise runs decide on the nonerased part of the sample.
Verdict erasure_resilient_extendable(const UniformTesterSpec& spec,
                                     double alpha, double eps,
                                     QueryOracle& oracle, Rng& rng);

/// Finite poset on {0, ..., N-1} with its reflexive-transitive closure.
class Poset {
 public:
  Poset(std::uint32_t size, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  static Poset chain(std::uint32_t size);
  static Poset antichain(std::uint32_t size);
  /// `centers` disjoint stars: center c precedes its `leaves` leaves.
  /// Element c * (leaves + 1) is a center, the next `leaves` are its leaves.
  static Poset star_forest(std::uint32_t centers, std::uint32_t leaves);

  [[nodiscard]] std::uint32_t size() const { return n_; }
  /// u ≼ v.
  [[nodiscard]] bool precedes(std::uint32_t u, std::uint32_t v) const {
    return (reach_[u * words_ + v / 64] >> (v % 64)) & 1U;
  }
  [[nodiscard]] const std::vector<std::pair<std::uint32_t, std::uint32_t>>&
  edges() const {
    return edges_;
  }

 private:
  std::uint32_t n_;
  std::uint32_t words_;
  std::vector<std::uint64_t> reach_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
};

/// Uniform poset-monotonicity tester: q = ceil(8 sqrt(N / eps)); rejects iff
/// the sample holds x ≼ y with f(x) > f(y). Points are poset elements.
UniformTesterSpec poset_monotone_uniform_spec(std::shared_ptr<const Poset> poset);

/// Bits alternate along sorted distinct positions this many times.
std::uint32_t count_alternations(const LabeledSample& sample);

std::uint64_t k_runs_sample_size(std::uint32_t k, double eps);

/// The k-run sampler as a uniform tester: rejects iff the sorted sample
/// alternates at least k times.
UniformTesterSpec k_runs_uniform_spec(std::uint32_t k);

/// k-run tester on a Bit-valued Line{n}: ceil(3(k+1) log2(k+1) / eps)
/// uniform queries; erased answers are skipped. Throws PreconditionViolated
/// unless eps > k^2 / n.
Verdict test_k_runs(QueryOracle& oracle, std::uint32_t k, double eps,
                    Rng& rng);

/// Read access to the e-filled view of an oracle: erased points read as e.
class FilledAccess {
 public:
  FilledAccess(QueryOracle& oracle, double fill)
      : oracle_(oracle), fill_(fill) {}
  [[nodiscard]] const Domain& domain() const { return oracle_.domain(); }
  double value(Index x) {
    const PointValue v = oracle_.query(x);
    return v.is_erased() ? fill_ : v.value();
  }

 private:
  QueryOracle& oracle_;
  double fill_;
};

/// Distance approximation with (1/eta) dist - delta <= estimate <= dist.
struct DistanceApprox {
  std::function<double(FilledAccess&)> estimate;
  double eta = 1.0;
  double delta = 0.0;
};

/// Exact relative distance to monotonicity of the filled line (LIS); an
/// approximator with eta = 1 and delta = 0.
DistanceApprox exact_monotone_line_approx();

/// Accepts iff approx(filled view) <= alpha. Throws PreconditionViolated
/// unless alpha < (eps - delta eta) / (eps + eta).
Verdict tester_from_distance_approx(const DistanceApprox& approx, double fill,
                                    double alpha, double eps,
                                    QueryOracle& oracle);

}  // namespace ert
