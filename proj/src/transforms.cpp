#include "ert/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ert/distance_oracles.hpp"
#include "ert/errors.hpp"
#include "ert/numeric.hpp"

namespace ert {
namespace {

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  b = mod(b, p);
  while (e > 0) {
    if (e & 1) r = static_cast<std::int64_t>((__int128)r * b % p);
    b = static_cast<std::int64_t>((__int128)b * b % p);
    e >>= 1;
  }
  return r;
}

Certificate sample_certificate(const LabeledSample& sample) {
  Certificate cert{Certificate::Kind::Sample, {}};
  for (const auto& s : sample) cert.points.push_back(s.point);
  std::sort(cert.points.begin(), cert.points.end());
  cert.points.erase(std::unique(cert.points.begin(), cert.points.end()),
                    cert.points.end());
  return cert;
}

// Queries `draws` uniform points; returns the nonerased ones and whether any
// draw was erased.
std::pair<LabeledSample, bool> draw_uniform(QueryOracle& oracle,
                                            std::uint64_t draws, Rng& rng) {
  const Box whole = Box::whole(oracle.domain());
  LabeledSample sample;
  bool saw_erased = false;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const Index x = sample_uniform(oracle.domain(), whole, rng);
    const PointValue v = oracle.query(x);
    if (v.is_erased()) {
      saw_erased = true;
    } else {
      sample.push_back({x, v});
    }
  }
  return {std::move(sample), saw_erased};
}

}  // namespace

bool rho_is_monotone(const POTSpec& pot, int steps) {
  double prev = pot.rho(1.0 / steps);
  for (int i = 2; i <= steps; ++i) {
    const double cur = pot.rho(static_cast<double>(i) / steps);
    if (cur < prev) return false;
    prev = cur;
  }
  return true;
}

double pot_detection_bound(const POTSpec& pot, double eps_f, double alpha) {
  return pot.rho(eps_f * (1.0 - alpha)) - alpha * pot.q;
}

Verdict erasure_resilient_pot_run(const POTSpec& pot, QueryOracle& oracle,
                                  Rng& rng) {
  auto [sample, saw_erased] = draw_uniform(oracle, pot.q, rng);
  if (saw_erased) {
    return Verdict::accept(Reason::ErasedSampleAccept, oracle.count());
  }
  if (pot.decide(sample)) {
    return Verdict::accept(Reason::AllChecksPassed, oracle.count());
  }
  return Verdict::reject(sample_certificate(sample), oracle.count());
}

std::uint64_t pot_repetitions(double detection_lower_bound) {
  if (!(detection_lower_bound > 0.0)) {
    throw PreconditionViolated("detection lower bound must be positive");
  }
  return ceil_count(std::log(3.0) / detection_lower_bound);
}

Verdict pot_amplify(const POTSpec& pot, double alpha,
                    double detection_lower_bound, QueryOracle& oracle,
                    Rng& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in [0, 1)");
  }
  const std::uint64_t reps = pot_repetitions(detection_lower_bound);
  for (std::uint64_t r = 0; r < reps; ++r) {
    Verdict v = erasure_resilient_pot_run(pot, oracle, rng);
    if (v.rejected()) return v;
  }
  return Verdict::accept(Reason::AllChecksPassed, oracle.count());
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t i = 2; i * i <= p; ++i) {
    if (p % i == 0) return false;
  }
  return true;
}

bool fits_low_degree(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& pts,
    std::uint32_t deg, std::int64_t p) {
  const std::size_t m = pts.size();
  if (m <= deg + 1) return true;
  // Newton divided differences; the fit exists iff every coefficient of
  // order > deg vanishes.
  std::vector<std::int64_t> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = mod(pts[i].second, p);
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      const std::int64_t dx = mod(pts[i].first - pts[i - j].first, p);
      const std::int64_t inv = pow_mod(dx, p - 2, p);
      c[i] = static_cast<std::int64_t>((__int128)mod(c[i] - c[i - 1], p) *
                                       inv % p);
    }
  }
  for (std::size_t j = deg + 1; j < m; ++j) {
    if (c[j] != 0) return false;
  }
  return true;
}

POTSpec low_degree_pot(std::int64_t p, std::uint32_t deg) {
  if (!is_prime(p)) throw InvalidField("modulus is not prime");
  if (deg + 2 > p) throw PreconditionViolated("need deg + 2 <= p");
  POTSpec pot;
  pot.q = deg + 2;
  pot.c = 1.0;
  pot.rho = [](double x) { return x; };
  pot.decide = [p, deg](const LabeledSample& sample) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (const auto& s : sample) {
      pts.emplace_back(static_cast<std::int64_t>(s.point), s.value.as_int());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return fits_low_degree(pts, deg, p);
  };
  return pot;
}

std::uint64_t extendable_draws(std::uint64_t q, double alpha) {
  return ceil_count(2.0 * static_cast<double>(q) / (1.0 - alpha));
}

std::uint32_t extendable_repetitions(std::uint64_t q) { return q < 8 ? 3 : 1; }

Verdict erasure_resilient_extendable(const UniformTesterSpec& spec,
                                     double alpha, double eps,
                                     QueryOracle& oracle, Rng& rng) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw PreconditionViolated("alpha must lie in [0, 1)");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw PreconditionViolated("eps must lie in (0, 1)");
  }
  const std::uint64_t q = spec.q(oracle.domain().size(), eps);
  const std::uint64_t draws = extendable_draws(q, alpha);
  const std::uint32_t reps = extendable_repetitions(q);
  bool short_sample = false;
  for (std::uint32_t r = 0; r < reps; ++r) {
    auto [sample, saw_erased] = draw_uniform(oracle, draws, rng);
    (void)saw_erased;
    if (sample.size() < q) {
      short_sample = true;
      continue;
    }
    if (!spec.decide(sample)) {
      return Verdict::reject(sample_certificate(sample), oracle.count());
    }
  }
  return Verdict::accept(
      short_sample ? Reason::ErasedSampleAccept : Reason::AllChecksPassed,
      oracle.count());
}

Poset::Poset(std::uint32_t size,
             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : n_(size), words_((size + 63) / 64), edges_(edges) {
  if (size == 0) throw PreconditionViolated("poset must be nonempty");
  std::vector<std::vector<std::uint32_t>> out(n_);
  std::vector<std::uint32_t> indegree(n_, 0);
  for (const auto& [u, v] : edges_) {
    if (u >= n_ || v >= n_) throw PreconditionViolated("poset edge out of range");
    if (u == v) continue;
    out[u].push_back(v);
    ++indegree[v];
  }
  std::vector<std::uint32_t> order;
  order.reserve(n_);
  for (std::uint32_t u = 0; u < n_; ++u) {
    if (indegree[u] == 0) order.push_back(u);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const std::uint32_t v : out[order[i]]) {
      if (--indegree[v] == 0) order.push_back(v);
    }
  }
  if (order.size() != n_) throw PreconditionViolated("poset edges form a cycle");
  reach_.assign(static_cast<std::size_t>(n_) * words_, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::uint32_t u = *it;
    std::uint64_t* row = &reach_[static_cast<std::size_t>(u) * words_];
    row[u / 64] |= std::uint64_t{1} << (u % 64);
    for (const std::uint32_t v : out[u]) {
      const std::uint64_t* other = &reach_[static_cast<std::size_t>(v) * words_];
      for (std::uint32_t w = 0; w < words_; ++w) row[w] |= other[w];
    }
  }
}

Poset Poset::chain(std::uint32_t size) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t i = 0; i + 1 < size; ++i) edges.emplace_back(i, i + 1);
  return Poset(size, edges);
}

Poset Poset::antichain(std::uint32_t size) { return Poset(size, {}); }

Poset Poset::star_forest(std::uint32_t centers, std::uint32_t leaves) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::uint32_t c = 0; c < centers; ++c) {
    const std::uint32_t root = c * (leaves + 1);
    for (std::uint32_t l = 1; l <= leaves; ++l) edges.emplace_back(root, root + l);
  }
  return Poset(centers * (leaves + 1), edges);
}

UniformTesterSpec poset_monotone_uniform_spec(
    std::shared_ptr<const Poset> poset) {
  UniformTesterSpec spec;
  spec.q = [](std::uint64_t n, double eps) {
    return ceil_count(8.0 * std::sqrt(static_cast<double>(n) / eps));
  };
  spec.decide = [poset = std::move(poset)](const LabeledSample& sample) {
    for (const auto& a : sample) {
      for (const auto& b : sample) {
        if (a.point != b.point &&
            poset->precedes(static_cast<std::uint32_t>(a.point),
                            static_cast<std::uint32_t>(b.point)) &&
            a.value.value() > b.value.value()) {
          return false;
        }
      }
    }
    return true;
  };
  return spec;
}

std::uint32_t count_alternations(const LabeledSample& sample) {
  std::vector<std::pair<Index, double>> pts;
  pts.reserve(sample.size());
  for (const auto& s : sample) pts.emplace_back(s.point, s.value.value());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return a.first == b.first;
                        }),
            pts.end());
  std::uint32_t alternations = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].second != pts[i - 1].second) ++alternations;
  }
  return alternations;
}

std::uint64_t k_runs_sample_size(std::uint32_t k, double eps) {
  const double kk = static_cast<double>(k) + 1.0;
  return ceil_count(3.0 * kk * std::log2(kk) / eps);
}

UniformTesterSpec k_runs_uniform_spec(std::uint32_t k) {
  if (k < 1) throw PreconditionViolated("k must be at least 1");
  UniformTesterSpec spec;
  spec.q = [k](std::uint64_t, double eps) { return k_runs_sample_size(k, eps); };
  spec.decide = [k](const LabeledSample& sample) {
    return count_alternations(sample) < k;
  };
  return spec;
}

Verdict test_k_runs(QueryOracle& oracle, std::uint32_t k, double eps,
                    Rng& rng) {
  const Domain& domain = oracle.domain();
  if (!domain.is_line()) throw PreconditionViolated("k-runs needs a line");
  if (oracle.kind() != ValueKind::Bit) {
    throw PreconditionViolated("k-runs needs Bit values");
  }
  if (k < 1) throw PreconditionViolated("k must be at least 1");
  if (!(eps > static_cast<double>(k) * k / static_cast<double>(domain.side())) ||
      !(eps < 1.0)) {
    throw PreconditionViolated("k-runs needs k^2/n < eps < 1");
  }
  auto [sample, saw_erased] =
      draw_uniform(oracle, k_runs_sample_size(k, eps), rng);
  (void)saw_erased;
  if (count_alternations(sample) >= k) {
    return Verdict::reject(sample_certificate(sample), oracle.count());
  }
  return Verdict::accept(Reason::AllChecksPassed, oracle.count());
}

DistanceApprox exact_monotone_line_approx() {
  DistanceApprox approx;
  approx.estimate = [](FilledAccess& view) {
    const std::uint64_t n = view.domain().size();
    std::vector<double> values(n);
    for (Index i = 0; i < n; ++i) values[i] = view.value(i);
    const std::size_t keep = longest_nondecreasing(values).size();
    return static_cast<double>(n - keep) / static_cast<double>(n);
  };
  return approx;
}

Verdict tester_from_distance_approx(const DistanceApprox& approx, double fill,
                                    double alpha, double eps,
                                    QueryOracle& oracle) {
  if (!(alpha >= 0.0 &&
        alpha < (eps - approx.delta * approx.eta) / (eps + approx.eta))) {
    throw PreconditionViolated(
        "alpha must satisfy alpha < (eps - delta eta) / (eps + eta)");
  }
  FilledAccess view(oracle, fill);
  const double estimate = approx.estimate(view);
  if (estimate <= alpha * (1.0 + 1e-12)) {
    return Verdict::accept(Reason::AllChecksPassed, oracle.count());
  }
  return Verdict::reject(Certificate{}, oracle.count());
}

}  // namespace ert
