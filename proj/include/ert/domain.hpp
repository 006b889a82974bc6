#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ert/rational.hpp"

namespace ert {

using Index = std::uint64_t;
using Coords = std::vector<std::uint32_t>;

/// The hypergrid [n]^d. A line is the d = 1 case and the Hamming cube is
/// n = 2.
///
/// Coordinates are 0-based (x_i in {0, ..., n-1}). The canonical index is
/// x_0 + n*x_1 + n^2*x_2 + ..., so the first coordinate varies fastest.
class Domain {
 public:
  Domain(std::uint64_t n, std::uint32_t d);

  static Domain line(std::uint64_t n) { return Domain(n, 1); }
  static Domain grid(std::uint64_t n, std::uint32_t d) { return Domain(n, d); }
  static Domain hypercube(std::uint32_t d) { return Domain(2, d); }

  [[nodiscard]] std::uint64_t side() const { return n_; }
  [[nodiscard]] std::uint32_t dims() const { return d_; }
  [[nodiscard]] std::uint64_t size() const { return size_; }
  [[nodiscard]] bool is_line() const { return d_ == 1; }

  /// n^r, the index distance between neighbours along dimension r.
  [[nodiscard]] std::uint64_t stride(std::uint32_t r) const {
    return strides_[r];
  }

  [[nodiscard]] Index to_index(std::span<const std::uint32_t> x) const;
  [[nodiscard]] Coords to_coords(Index i) const;
  [[nodiscard]] std::uint32_t coord(Index i, std::uint32_t r) const {
    return static_cast<std::uint32_t>((i / strides_[r]) % n_);
  }

  /// x <= y coordinatewise.
  [[nodiscard]] bool precedes_or_equal(Index x, Index y) const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.n_ == b.n_ && a.d_ == b.d_;
  }

 private:
  std::uint64_t n_;
  std::uint32_t d_;
  std::uint64_t size_;
  std::vector<std::uint64_t> strides_;
};

enum class ValueKind { Real, Bit, Field };

const char* to_string(ValueKind kind);

/// One value of an erased function: either the erasure symbol or a value of
/// some kind. Bits and field elements are held as exact small integers in
/// the double payload.
class PointValue {
 public:
  static PointValue erased() { return PointValue(true, ValueKind::Real, 0.0); }
  static PointValue real(double v) {
    return PointValue(false, ValueKind::Real, v);
  }
  static PointValue bit(int b) {
    return PointValue(false, ValueKind::Bit, b ? 1.0 : 0.0);
  }
  static PointValue field(std::int64_t v) {
    return PointValue(false, ValueKind::Field, static_cast<double>(v));
  }

  [[nodiscard]] bool is_erased() const { return erased_; }
  [[nodiscard]] ValueKind kind() const { return kind_; }
  [[nodiscard]] double value() const { return value_; }
  [[nodiscard]] std::int64_t as_int() const {
    return static_cast<std::int64_t>(value_);
  }

  friend bool operator==(const PointValue& a, const PointValue& b) {
    if (a.erased_ || b.erased_) return a.erased_ == b.erased_;
    return a.kind_ == b.kind_ && a.value_ == b.value_;
  }

 private:
  PointValue(bool erased, ValueKind kind, double value)
      : erased_(erased), kind_(kind), value_(value) {}

  bool erased_;
  ValueKind kind_;
  double value_;
};

/// A function on a Domain that may be erased (⊥) on some points.
///
/// Immutable after construction and safe to share between threads. The
/// constructor enforces a single value kind, a nonempty nonerased set and
/// |erased| <= declared_alpha * |domain|.
class ErasedFunction {
 public:
  ErasedFunction(Domain domain, std::vector<PointValue> values,
                 Rational declared_alpha);
  /// declared_alpha defaults to the exact erased fraction.
  ErasedFunction(Domain domain, std::vector<PointValue> values);

  /// Total real-valued function.
  static ErasedFunction from_reals(Domain domain, std::span<const double> v);

  [[nodiscard]] const Domain& domain() const { return domain_; }
  [[nodiscard]] ValueKind kind() const { return kind_; }
  [[nodiscard]] std::int64_t modulus() const { return modulus_; }
  [[nodiscard]] const Rational& declared_alpha() const {
    return declared_alpha_;
  }

  [[nodiscard]] PointValue at(Index i) const;
  [[nodiscard]] bool is_erased(Index i) const { return erased_[i] != 0; }
  [[nodiscard]] double value(Index i) const { return values_[i]; }

  [[nodiscard]] std::uint64_t erased_count() const { return erased_count_; }
  [[nodiscard]] std::uint64_t nonerased_count() const {
    return domain_.size() - erased_count_;
  }
  /// Nonerased points in increasing canonical order.
  [[nodiscard]] std::vector<Index> nonerased() const;

  /// Field elements are integers mod modulus; set by builders of field
  /// functions (0 for other kinds).
  ErasedFunction with_modulus(std::int64_t p) const;

  /// Same values with the given declared bound (validated).
  ErasedFunction with_declared_alpha(Rational alpha) const;

 private:
  Domain domain_;
  ValueKind kind_ = ValueKind::Real;
  std::int64_t modulus_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> erased_;
  std::uint64_t erased_count_ = 0;
  Rational declared_alpha_;
};

/// Exact |erased| / |domain|.
Rational erased_fraction(const ErasedFunction& f);

/// An axis-parallel line: all points that agree with `fixed` off axis `dim`.
/// fixed[dim] is ignored (kept at 0).
struct AxisLine {
  std::uint32_t dim = 0;
  Coords fixed;

  [[nodiscard]] Index base(const Domain& domain) const;
  [[nodiscard]] Index point(const Domain& domain, std::uint64_t pos) const {
    return base(domain) + pos * domain.stride(dim);
  }
  friend bool operator==(const AxisLine&, const AxisLine&) = default;
};

/// Canonical numbering of the d * n^(d-1) axis lines and its inverse.
std::uint64_t axis_line_count(const Domain& domain);
AxisLine axis_line_from_ordinal(const Domain& domain, std::uint64_t ordinal);
std::uint64_t axis_line_ordinal(const Domain& domain, const AxisLine& line);

/// f restricted to `line`, as a function on Line{n}; erasures preserved and
/// declared alpha set to the line's exact erased fraction.
ErasedFunction restrict_to_line(const ErasedFunction& f, const AxisLine& line);

}  // namespace ert
