#include "ert/oracle.hpp"

#include <algorithm>

#include "ert/errors.hpp"

namespace ert {

void QueryOracle::set_budget(std::uint64_t budget) {
  if (count_ != 0) {
    throw PreconditionViolated("budget can only be set before any query");
  }
  budget_ = budget;
  cap_ = budget;
}

ScopedBudget::ScopedBudget(QueryOracle& oracle, std::uint64_t allowance)
    : oracle_(oracle), saved_cap_(oracle.cap_) {
  const std::uint64_t room = oracle.budget_ - oracle.count_;
  oracle.cap_ = std::min(oracle.cap_,
                         oracle.count_ + std::min(allowance, room));
}

ScopedBudget::~ScopedBudget() { oracle_.cap_ = saved_cap_; }

Box Box::whole(const Domain& domain) {
  Box b;
  b.lo.assign(domain.dims(), 0);
  b.hi.assign(domain.dims(), static_cast<std::uint32_t>(domain.side() - 1));
  return b;
}

Box Box::on_line(const Domain& domain, const AxisLine& line, std::uint32_t lo,
                 std::uint32_t hi) {
  Box b;
  b.lo = line.fixed;
  b.hi = line.fixed;
  b.lo.resize(domain.dims(), 0);
  b.hi.resize(domain.dims(), 0);
  b.lo[line.dim] = lo;
  b.hi[line.dim] = hi;
  return b;
}

std::uint64_t Box::size() const {
  std::uint64_t s = 1;
  for (std::size_t r = 0; r < lo.size(); ++r) s *= hi[r] - lo[r] + 1;
  return s;
}

Index sample_uniform(const Domain& domain, const Box& region, Rng& rng) {
  Index i = 0;
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    const std::uint64_t x =
        region.lo[r] == region.hi[r]
            ? region.lo[r]
            : rng.uniform_in(region.lo[r], region.hi[r]);
    i += x * domain.stride(r);
  }
  return i;
}

QueriedPoint sample_nonerased_uniform(QueryOracle& oracle, const Box& region,
                                      Rng& rng) {
  for (;;) {
    const Index x = sample_uniform(oracle.domain(), region, rng);
    const PointValue v = oracle.query(x);
    if (!v.is_erased()) return {x, v};
  }
}

const char* to_string(Outcome o) {
  return o == Outcome::Accept ? "accept" : "reject";
}

const char* to_string(Reason r) {
  switch (r) {
    case Reason::BudgetExhausted:
      return "budget_exhausted";
    case Reason::ViolationFound:
      return "violation_found";
    case Reason::AllChecksPassed:
      return "all_checks_passed";
    case Reason::ErasedSampleAccept:
      return "erased_sample_accept";
  }
  return "?";
}

}  // namespace ert
