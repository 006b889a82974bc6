#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ert/distance_oracles.hpp"
#include "ert/domain.hpp"
#include "ert/rng.hpp"

namespace ert {

/// Builds a total function of the given kind from raw values.
ErasedFunction make_total(const Domain& domain, const std::vector<double>& v,
                          ValueKind kind = ValueKind::Real,
                          std::int64_t modulus = 0);

/// Erases exactly the listed points; declared alpha is the exact fraction.
ErasedFunction erase_points(const ErasedFunction& f,
                            const std::vector<Index>& points);

/// Erases exactly floor(alpha |D|) points, uniform without replacement.
ErasedFunction erase_random(const ErasedFunction& f, double alpha, Rng& rng);

/// Points a midpoint binary search on Line{n} visits, in level order: the
/// midpoint of [0, n-1], then those of both halves, and so on.
std::vector<Index> binary_search_pivot_order(std::uint64_t n);

/// Erases the first floor(alpha n) entries of binary_search_pivot_order.
ErasedFunction erase_binary_search_pivots(const ErasedFunction& f,
                                          double alpha);

/// On {0,1}^d, d even: erased on the weight-d/2 layer, 1 below it and 0
/// above it.
ErasedFunction hypercube_middle_layer(std::uint32_t d);

/// How a generated instance is erased.
enum class ErasureStrategy { None, Random, BinarySearchPivots };
ErasureStrategy erasure_strategy_from_tag(const std::string& tag);
const char* to_string(ErasureStrategy s);

struct InstanceSpec {
  Property property;
  std::uint64_t n = 64;
  std::uint32_t d = 1;
  bool member = false;
  double eps = 0.25;
  double alpha = 0.0;
  ErasureStrategy erasure = ErasureStrategy::Random;
  std::uint64_t seed = 1;
};

struct Instance {
  ErasedFunction f;
  DistanceReport report;
};

/// Domain a property's instances live on: Line{n}, [n]^d, Line{p} for
/// low-degree, Line{|P|} for posets.
Domain instance_domain(const Property& property, std::uint64_t n,
                       std::uint32_t d);

/// Structured far template (variant 0 is the plain one; higher variants add
/// seeded perturbations).
ErasedFunction far_template(const Property& property, const Domain& domain,
                            int variant, Rng& rng);

/// Template plus erasures, certified by the exact oracle; retries with fresh
/// erasures and variants. Throws GenerationFailed after `max_attempts`.
Instance generate_far_instance(const Property& property, const Domain& domain,
                               double eps, double alpha,
                               ErasureStrategy erasure, Rng& rng,
                               int max_attempts = 32);

/// Random member of the property, then erased. Throws GenerationFailed if
/// the oracle does not certify it as restorable.
ErasedFunction generate_member_instance(const Property& property,
                                        const Domain& domain, double alpha,
                                        ErasureStrategy erasure, Rng& rng);

/// Runs the spec: member or far instance plus its distance report.
Instance generate_instance(const InstanceSpec& spec);

}  // namespace ert
