#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ert/bounds.hpp"
#include "ert/oracle.hpp"
#include "ert/rng.hpp"

namespace ert {

/// Positions 0..n-1 of one axis line, read through an oracle. On a Line
/// domain this is the whole domain; on a hypergrid it is a sampled line.
class LineAccess {
 public:
  LineAccess(QueryOracle& oracle, AxisLine line);
  /// The whole domain of a Line oracle.
  explicit LineAccess(QueryOracle& oracle);

  [[nodiscard]] std::uint32_t size() const { return size_; }
  [[nodiscard]] Index point(std::uint32_t pos) const {
    return base_ + pos * stride_;
  }
  [[nodiscard]] const AxisLine& line() const { return line_; }
  QueryOracle& oracle() { return oracle_; }

  PointValue query(std::uint32_t pos) { return oracle_.query(point(pos)); }

  struct Hit {
    std::uint32_t pos;
    double value;
  };
  /// Uniform nonerased position in [lo, hi].
  Hit sample_nonerased(std::uint32_t lo, std::uint32_t hi, Rng& rng);

 private:
  QueryOracle& oracle_;
  AxisLine line_;
  Index base_;
  std::uint64_t stride_;
  std::uint32_t size_;
};

/// Violation test for a pair of line positions lo < hi with their values.
using PairCheck =
    std::function<bool(std::uint32_t lo, double f_lo, std::uint32_t hi,
                       double f_hi)>;

bool monotone_pair_violated(std::uint32_t lo, double f_lo, std::uint32_t hi,
                            double f_hi);

/// One randomized binary search for s: pivots are uniform nonerased points
/// of the shrinking interval, and every pivot m is checked against s with
/// `check` (ordered by position). Ends when the pivot is s. Returns the
/// first violated pair (as line positions, smaller first).
std::optional<std::pair<std::uint32_t, std::uint32_t>> randomized_binary_search(
    LineAccess& line, std::uint32_t s, double f_s, Rng& rng,
    const PairCheck& check);

// Query budgets and iteration counts (log base 2 throughout).
std::uint64_t monotone_line_budget(std::uint64_t n, double eps, double alpha);
std::uint64_t monotone_line_iterations(double eps);
std::uint64_t bdp_line_view_budget(std::uint64_t n, double eps, double alpha);
std::uint64_t bdp_line_budget(std::uint64_t n, double eps, double alpha);
std::uint64_t bdp_line_view_iterations(double eps);
std::uint64_t convex_line_budget(std::uint64_t n, double eps, double alpha);
std::uint64_t convex_line_iterations(double eps);

/// Erasure-resilient monotonicity tester for Line{n}. Sets the oracle budget.
/// A Reject carries the violated pair.
Verdict test_monotone_line(QueryOracle& oracle, double eps, double alpha,
                           Rng& rng);

/// Value maps g, h turning a finite bounding pair into two monotonicity
/// problems. With gamma = (u - l)/2 and sigma(i) = sum_{j>=i} (l + u)/2:
///   g(i, v) =   v + sigma(i)  - sum_{r>=i} gamma(r)
///   h(i, v) = -(v + sigma(i)) - sum_{r>=i} gamma(r)
/// A pair violates the bounds in f iff it violates monotonicity in g or h.
class BdpTransforms {
 public:
  /// Throws PreconditionViolated if some bound is infinite.
  explicit BdpTransforms(const StepBounds& bounds);

  [[nodiscard]] double g(std::uint32_t i, double v) const;
  [[nodiscard]] double h(std::uint32_t i, double v) const;

 private:
  // Suffix sums of gamma and of the midpoint shift, size n (last entry 0).
  std::vector<long double> gamma_suffix_;
  std::vector<long double> shift_suffix_;
};

BdpTransforms bdp_to_monotone_transforms(const StepBounds& bounds);

/// The two pair checks a BDP reduces to: the g view and the h view. Finite
/// bounds go through BdpTransforms; bounds with infinite entries use the
/// equivalent direct one-sided comparisons.
std::pair<PairCheck, PairCheck> bdp_view_checks(const StepBounds& bounds);

/// Erasure-resilient tester for a bounded-derivative property on Line{n}.
/// Monotone bounds dispatch to test_monotone_line. Otherwise the g and h
/// views are each tested for monotonicity at proximity eps/4 with
/// ceil(4 ln 6 / eps) searches and their own sub-budget.
Verdict test_bdp_line(QueryOracle& oracle, const StepBounds& bounds,
                      double eps, double alpha, Rng& rng);

/// Baseline that is not erasure-resilient: binary search with fixed midpoint
/// pivots. A search that lands on an erased midpoint has no rule for ⊥ and
/// is abandoned.
Verdict test_monotone_line_midpoint_baseline(QueryOracle& oracle, double eps,
                                             double alpha, Rng& rng);

// ---------------------------------------------------------------------------
// Convexity

/// Endpoints of a secant; its slope is (fb - fa) / (b - a).
struct Secant {
  std::uint32_t a;
  double fa;
  std::uint32_t b;
  double fb;
};

/// slope(p) > slope(q) beyond tolerance (cross-multiplied, no division).
bool slope_greater(const Secant& p, const Secant& q);

struct Anchor {
  std::uint32_t pos;
  double value;
};

/// State of one interval on the search path. Absent slopes stand for -inf
/// (left) and +inf (right).
struct IntervalFrame {
  std::uint32_t lo;
  std::uint32_t hi;
  std::vector<Anchor> anchors;
  std::optional<Secant> left_slope;
  std::optional<Secant> right_slope;
  std::uint32_t s;
};

/// Which anchors descend into the child interval.
enum class AnchorPolicy {
  /// Points of A ∪ {x, y, z} on the child's side of x.
  Merged,
  /// Points of the incoming A only.
  IncomingOnly,
};

/// Chooses the pivot of [lo, hi]; must return a nonerased position.
using PivotSource =
    std::function<LineAccess::Hit(std::uint32_t lo, std::uint32_t hi)>;

struct IntervalResult {
  bool rejected = false;
  Certificate certificate;  // line positions
};

/// Walks the search path for frame.s: pick a pivot x, walk to the nearest
/// nonerased neighbours y > x and z < x inside the interval, check that the
/// slope chain left_slope <= anchors' slopes <= right_slope is sorted, then
/// descend into [lo, z] with right slope (z, x) or [y, hi] with left slope
/// (x, y). Walking queries are added to `walking_queries` as they happen;
/// BudgetExhausted propagates.
IntervalResult test_interval(IntervalFrame frame, LineAccess& line,
                             const PivotSource& pivots,
                             std::uint64_t& walking_queries,
                             AnchorPolicy policy = AnchorPolicy::Merged);

/// Erasure-resilient convexity tester for real-valued Line{n}.
Verdict test_convex_line(QueryOracle& oracle, double eps, double alpha,
                         Rng& rng, AnchorPolicy policy = AnchorPolicy::Merged);

// ---------------------------------------------------------------------------
// Binary search trees over the nonerased points, for analysis.

/// A binary search tree on a sorted key set. Each node owns the interval of
/// line positions [lo, hi] it is responsible for: the root owns [0, n-1],
/// and a node with key k in [lo, hi] gives [lo, k-1] and [k+1, hi] to its
/// children.
class SearchTree {
 public:
  struct Node {
    std::uint32_t key;
    std::uint32_t lo;
    std::uint32_t hi;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  /// Random BST: the root is a uniform key, recursively.
  static SearchTree random(const std::vector<std::uint32_t>& keys,
                           std::uint32_t n, Rng& rng);
  /// Tree whose root chooser picks key index `choose(first, last)` of every
  /// key range (used for enumeration and balanced trees).
  static SearchTree build(
      const std::vector<std::uint32_t>& keys, std::uint32_t n,
      const std::function<std::size_t(std::size_t, std::size_t)>& choose);
  /// Every tree shape on the keys (Catalan-many).
  static std::vector<SearchTree> enumerate(
      const std::vector<std::uint32_t>& keys, std::uint32_t n);

  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] std::int32_t root() const { return root_; }
  /// Number of levels (nodes on the longest root-to-leaf path).
  [[nodiscard]] std::uint32_t height() const;
  /// Node indices from the root to the node with key s.
  [[nodiscard]] std::vector<std::int32_t> path_to(std::uint32_t s) const;

 private:
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

/// Height of a random BST on m keys, without materializing the tree.
std::uint32_t random_bst_height(std::uint32_t m, Rng& rng);

/// Sampling queries paid along the search path to s in a fixed tree: at each
/// node, uniform draws from its interval until a nonerased point is hit.
std::uint64_t path_sampling_queries(const SearchTree& tree, std::uint32_t s,
                                    LineAccess& line, Rng& rng);

/// True if the search path to s in `tree` compares s with no pivot that
/// violates monotonicity (values read from f, a Line function).
bool is_searchable(const SearchTree& tree, std::uint32_t s,
                   const ErasedFunction& f);

/// Runs the interval procedure for s with pivots taken from `tree`. True if
/// it rejects, i.e. s lies in a violator interval of the tree.
bool convex_path_rejects(const SearchTree& tree, std::uint32_t s,
                         const ErasedFunction& f,
                         AnchorPolicy policy = AnchorPolicy::Merged);

}  // namespace ert
