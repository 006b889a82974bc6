#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ert/bounds.hpp"
#include "ert/domain.hpp"
#include "ert/oracle.hpp"
#include "ert/rational.hpp"

namespace ert {

class Poset;

enum class PropertyKind {
  MonotoneLine,
  BdpLine,
  ConvexLine,
  MonotoneGrid,
  BdpGrid,
  KRuns,
  LowDegree,
  PosetMonotone,
};

/// A property together with its parameters.
struct Property {
  Property(PropertyKind k = PropertyKind::MonotoneLine) : kind(k) {}

  PropertyKind kind;
  std::optional<BoundingFamily> bounds;  // BdpLine (one dimension), BdpGrid
  std::uint32_t k = 0;                   // KRuns
  std::uint32_t degree = 0;              // LowDegree
  std::shared_ptr<const Poset> poset;    // PosetMonotone

  static Property monotone_line() { return {PropertyKind::MonotoneLine}; }
  static Property convex_line() { return {PropertyKind::ConvexLine}; }
  static Property monotone_grid() { return {PropertyKind::MonotoneGrid}; }
  static Property bdp_line(const StepBounds& b);
  static Property bdp_grid(const BoundingFamily& b);
  static Property k_runs(std::uint32_t k);
  static Property low_degree(std::uint32_t degree);
  static Property poset_monotone(std::shared_ptr<const Poset> poset);

  [[nodiscard]] std::string tag() const;
};

/// Parses "monotone-line", "bdp-line", "convex-line", "monotone-grid",
/// "bdp-grid", "k-runs", "low-degree" or "poset-monotone".
PropertyKind property_kind_from_tag(const std::string& tag);
const char* to_string(PropertyKind kind);

/// Distance of f restricted to its nonerased set N, with an optimal kept
/// set as certificate. relative = absolute / |N|.
struct DistanceReport {
  std::string property;
  std::uint64_t absolute = 0;
  std::uint64_t total = 0;
  Rational relative;
  std::vector<Index> kept;
  /// Size of a maximal matching of the violation graph (order properties).
  std::optional<std::uint64_t> matching_lower_bound;
  bool exact = true;

  friend bool operator==(const DistanceReport&, const DistanceReport&) = default;
};

/// Indices of a longest nondecreasing subsequence.
std::vector<std::size_t> longest_nondecreasing(const std::vector<double>& v);

DistanceReport distance_to_monotone_line(const ErasedFunction& f);
DistanceReport distance_to_bdp_line(const ErasedFunction& f,
                                    const StepBounds& bounds);
/// O(|N|^3); throws SizeLimit above 1024 nonerased points.
DistanceReport distance_to_convex_line(const ErasedFunction& f);
DistanceReport distance_to_k_runs(const ErasedFunction& f, std::uint32_t k);
/// Field-valued f on Line{p}; enumerates all p^(deg+1) polynomials. Throws
/// SizeLimit when p > 64 or the enumeration exceeds 2^24 polynomials.
DistanceReport distance_to_low_degree(const ErasedFunction& f,
                                      std::uint32_t deg);

/// Branch and bound over vertex covers of the violation graph; throws
/// SizeLimit above 20 nonerased points. Also fills the matching bound.
DistanceReport distance_to_monotone_grid_small(const ErasedFunction& f);
DistanceReport distance_to_bdp_grid_small(const ErasedFunction& f,
                                          const BoundingFamily& bounds);

/// Exact at any size. The violation relation of a BDP is a strict partial
/// order, so the distance is the maximum matching of its split bipartite
/// graph and the kept set is the maximum antichain read off a König cover.
DistanceReport distance_to_monotone_grid(const ErasedFunction& f);
DistanceReport distance_to_bdp_grid(const ErasedFunction& f,
                                    const BoundingFamily& bounds);
DistanceReport distance_to_poset_monotone(const ErasedFunction& f,
                                          const Poset& poset);

/// Dispatches on the property.
DistanceReport distance(const ErasedFunction& f, const Property& property);

/// Some restoration of f has the property (distance of f|N is 0).
bool is_restorable(const ErasedFunction& f, const Property& property);

// Order-graph helpers, exposed for tests.

/// Directed edges x -> y of a strict partial order on {0..m-1}.
using OrderEdges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

struct AntichainResult {
  std::uint64_t matching = 0;
  std::vector<std::uint32_t> antichain;
};
/// Hopcroft-Karp on the split graph plus the König construction.
AntichainResult maximum_antichain(std::uint32_t m, const OrderEdges& edges);
/// Greedy maximal matching of the underlying undirected graph.
std::uint64_t greedy_matching_size(std::uint32_t m, const OrderEdges& edges);
/// Exact minimum vertex cover, m <= 20.
std::vector<std::uint32_t> minimum_vertex_cover_small(std::uint32_t m,
                                                      const OrderEdges& edges);

/// The canonical completion: a total function on f's domain that agrees with
/// f on `kept` and has the property whenever `kept` is violation-free.
std::vector<double> complete(const ErasedFunction& f, const Property& property,
                             const std::vector<Index>& kept);

/// Membership of a total function given by its values.
bool is_member_total(const Domain& domain, const std::vector<double>& values,
                     const Property& property, std::int64_t modulus = 0);

/// Re-derives a report: kept is a subset of N of the right size and its
/// completion is a member. On failure writes a reason if `why` is set.
bool validate_report(const ErasedFunction& f, const Property& property,
                     const DistanceReport& report, std::string* why = nullptr);

/// A Reject certificate is evidence against every restoration of f.
bool validate_certificate(const ErasedFunction& f, const Property& property,
                          const Certificate& cert);

}  // namespace ert
