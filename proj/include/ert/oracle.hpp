#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ert/domain.hpp"
#include "ert/rng.hpp"

namespace ert {

/// Thrown by QueryOracle::query when the budget is used up. This is a control
/// signal, not an error: testers catch it at their top level and accept.
struct BudgetExhausted {};

/// Counting, budget-enforcing access to an ErasedFunction. Testers read the
/// function only through this class.
class QueryOracle {
 public:
  static constexpr std::uint64_t kUnlimited =
      std::numeric_limits<std::uint64_t>::max();

  explicit QueryOracle(const ErasedFunction& target,
                       std::uint64_t budget = kUnlimited)
      : target_(&target), budget_(budget), cap_(budget) {}

  /// Returns f(x), or PointValue::erased(). Throws BudgetExhausted if the
  /// count has reached the active cap before this query.
  PointValue query(Index x) {
    if (count_ >= cap_) throw BudgetExhausted{};
    ++count_;
    return target_->at(x);
  }

  [[nodiscard]] const Domain& domain() const { return target_->domain(); }
  [[nodiscard]] ValueKind kind() const { return target_->kind(); }
  [[nodiscard]] std::int64_t modulus() const { return target_->modulus(); }
  [[nodiscard]] std::uint64_t count() const { return count_; }
  [[nodiscard]] std::uint64_t budget() const { return budget_; }

  /// Sets the global budget. Only legal before the first query.
  void set_budget(std::uint64_t budget);

 private:
  friend class ScopedBudget;

  const ErasedFunction* target_;
  std::uint64_t budget_;
  std::uint64_t cap_;
  std::uint64_t count_ = 0;
};

/// Temporarily caps the oracle at (current count + allowance), never above
/// the global budget. Restores the previous cap on destruction.
class ScopedBudget {
 public:
  ScopedBudget(QueryOracle& oracle, std::uint64_t allowance);
  ~ScopedBudget();
  ScopedBudget(const ScopedBudget&) = delete;
  ScopedBudget& operator=(const ScopedBudget&) = delete;

 private:
  QueryOracle& oracle_;
  std::uint64_t saved_cap_;
};

/// Inclusive axis-aligned box lo[r] <= x_r <= hi[r].
struct Box {
  Coords lo;
  Coords hi;

  static Box whole(const Domain& domain);
  /// Interval [lo, hi] of positions along `line`.
  static Box on_line(const Domain& domain, const AxisLine& line,
                     std::uint32_t lo, std::uint32_t hi);
  [[nodiscard]] std::uint64_t size() const;
};

/// A point together with its (already paid for) value.
struct QueriedPoint {
  Index point;
  PointValue value;
};

/// Draws uniform points of `region` and queries them until one is nonerased.
/// Every attempt is counted; BudgetExhausted propagates.
QueriedPoint sample_nonerased_uniform(QueryOracle& oracle, const Box& region,
                                      Rng& rng);

/// Uniform point of `region` (no query).
Index sample_uniform(const Domain& domain, const Box& region, Rng& rng);

enum class Outcome { Accept, Reject };
enum class Reason {
  BudgetExhausted,
  ViolationFound,
  AllChecksPassed,
  ErasedSampleAccept
};

const char* to_string(Outcome o);
const char* to_string(Reason r);

/// Evidence attached to a Reject, checkable against the raw function.
///
///  ViolatedPair:  points = {x, y}; the property forbids this pair of values.
///  SlopeChain:    points = {a, b, c, e} with a < b <= c < e and
///                 slope(a, b) > slope(c, e).
///  Sample:        points = the sampled nonerased points the decision
///                 rejected (k-run alternations, unfittable polynomial).
struct Certificate {
  enum class Kind { None, ViolatedPair, SlopeChain, Sample };
  Kind kind = Kind::None;
  std::vector<Index> points;
};

struct Verdict {
  Outcome outcome = Outcome::Accept;
  Reason reason = Reason::AllChecksPassed;
  std::uint64_t queries_used = 0;
  /// Walking queries (convexity tester only); the rest are sampling queries.
  std::uint64_t walking_queries = 0;
  Certificate certificate;

  [[nodiscard]] bool rejected() const { return outcome == Outcome::Reject; }

  static Verdict accept(Reason reason, std::uint64_t queries) {
    return Verdict{Outcome::Accept, reason, queries, 0, {}};
  }
  static Verdict reject(Certificate cert, std::uint64_t queries) {
    return Verdict{Outcome::Reject, Reason::ViolationFound, queries, 0,
                   std::move(cert)};
  }
};

}  // namespace ert
