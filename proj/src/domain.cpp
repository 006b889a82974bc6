#include "ert/domain.hpp"

#include <algorithm>

#include "ert/errors.hpp"

namespace ert {

Domain::Domain(std::uint64_t n, std::uint32_t d) : n_(n), d_(d) {
  if (n == 0 || d == 0) {
    throw PreconditionViolated("domain needs n >= 1 and d >= 1");
  }
  strides_.reserve(d);
  std::uint64_t size = 1;
  for (std::uint32_t r = 0; r < d; ++r) {
    strides_.push_back(size);
    if (size > UINT64_MAX / n) {
      throw PreconditionViolated("domain size n^d overflows 64 bits");
    }
    size *= n;
  }
  size_ = size;
}

Index Domain::to_index(std::span<const std::uint32_t> x) const {
  if (x.size() != d_) throw PreconditionViolated("coordinate arity mismatch");
  Index i = 0;
  for (std::uint32_t r = 0; r < d_; ++r) {
    if (x[r] >= n_) throw PreconditionViolated("coordinate out of range");
    i += x[r] * strides_[r];
  }
  return i;
}

Coords Domain::to_coords(Index i) const {
  Coords x(d_);
  for (std::uint32_t r = 0; r < d_; ++r) {
    x[r] = static_cast<std::uint32_t>(i % n_);
    i /= n_;
  }
  return x;
}

bool Domain::precedes_or_equal(Index x, Index y) const {
  for (std::uint32_t r = 0; r < d_; ++r) {
    if (x % n_ > y % n_) return false;
    x /= n_;
    y /= n_;
  }
  return true;
}

const char* to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Real:
      return "real";
    case ValueKind::Bit:
      return "bit";
    case ValueKind::Field:
      return "field";
  }
  return "?";
}

ErasedFunction::ErasedFunction(Domain domain, std::vector<PointValue> values,
                               Rational declared_alpha)
    : domain_(std::move(domain)), declared_alpha_(declared_alpha) {
  if (values.size() != domain_.size()) {
    throw PreconditionViolated("value count does not match domain size");
  }
  if (declared_alpha < Rational(0) || declared_alpha >= Rational(1)) {
    throw PreconditionViolated("declared alpha must lie in [0, 1)");
  }
  values_.resize(values.size());
  erased_.resize(values.size());
  bool kind_set = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const PointValue& v = values[i];
    if (v.is_erased()) {
      erased_[i] = 1;
      ++erased_count_;
      continue;
    }
    if (!kind_set) {
      kind_ = v.kind();
      kind_set = true;
    } else if (v.kind() != kind_) {
      throw PreconditionViolated("mixed value kinds in one function");
    }
    values_[i] = v.value();
  }
  if (erased_count_ == domain_.size()) {
    throw PreconditionViolated("function has no nonerased point");
  }
  if (Rational(static_cast<std::int64_t>(erased_count_),
               static_cast<std::int64_t>(domain_.size())) > declared_alpha_) {
    throw PreconditionViolated("erased fraction exceeds declared alpha");
  }
}

ErasedFunction::ErasedFunction(Domain domain, std::vector<PointValue> values)
    : ErasedFunction(domain, values, [&] {
        const auto erased = std::count_if(
            values.begin(), values.end(),
            [](const PointValue& v) { return v.is_erased(); });
        return Rational(static_cast<std::int64_t>(erased),
                        static_cast<std::int64_t>(values.size()));
      }()) {}

ErasedFunction ErasedFunction::from_reals(Domain domain,
                                          std::span<const double> v) {
  std::vector<PointValue> values;
  values.reserve(v.size());
  for (double x : v) values.push_back(PointValue::real(x));
  return ErasedFunction(std::move(domain), std::move(values));
}

PointValue ErasedFunction::at(Index i) const {
  if (erased_[i]) return PointValue::erased();
  switch (kind_) {
    case ValueKind::Bit:
      return PointValue::bit(values_[i] != 0.0);
    case ValueKind::Field:
      return PointValue::field(static_cast<std::int64_t>(values_[i]));
    case ValueKind::Real:
      break;
  }
  return PointValue::real(values_[i]);
}

std::vector<Index> ErasedFunction::nonerased() const {
  std::vector<Index> out;
  out.reserve(nonerased_count());
  for (Index i = 0; i < domain_.size(); ++i) {
    if (!erased_[i]) out.push_back(i);
  }
  return out;
}

ErasedFunction ErasedFunction::with_modulus(std::int64_t p) const {
  ErasedFunction copy = *this;
  copy.modulus_ = p;
  return copy;
}

ErasedFunction ErasedFunction::with_declared_alpha(Rational alpha) const {
  if (alpha < Rational(0) || alpha >= Rational(1) ||
      Rational(static_cast<std::int64_t>(erased_count_),
               static_cast<std::int64_t>(domain_.size())) > alpha) {
    throw PreconditionViolated("declared alpha below erased fraction");
  }
  ErasedFunction copy = *this;
  copy.declared_alpha_ = alpha;
  return copy;
}

Rational erased_fraction(const ErasedFunction& f) {
  return Rational(static_cast<std::int64_t>(f.erased_count()),
                  static_cast<std::int64_t>(f.domain().size()));
}

Index AxisLine::base(const Domain& domain) const {
  Index i = 0;
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    if (r != dim) i += fixed[r] * domain.stride(r);
  }
  return i;
}

std::uint64_t axis_line_count(const Domain& domain) {
  return domain.dims() * (domain.size() / domain.side());
}

AxisLine axis_line_from_ordinal(const Domain& domain, std::uint64_t ordinal) {
  const std::uint64_t per_dim = domain.size() / domain.side();
  AxisLine line;
  line.dim = static_cast<std::uint32_t>(ordinal / per_dim);
  std::uint64_t rest = ordinal % per_dim;
  line.fixed.assign(domain.dims(), 0);
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    if (r == line.dim) continue;
    line.fixed[r] = static_cast<std::uint32_t>(rest % domain.side());
    rest /= domain.side();
  }
  return line;
}

std::uint64_t axis_line_ordinal(const Domain& domain, const AxisLine& line) {
  const std::uint64_t per_dim = domain.size() / domain.side();
  std::uint64_t rest = 0;
  std::uint64_t scale = 1;
  for (std::uint32_t r = 0; r < domain.dims(); ++r) {
    if (r == line.dim) continue;
    rest += line.fixed[r] * scale;
    scale *= domain.side();
  }
  return line.dim * per_dim + rest;
}

ErasedFunction restrict_to_line(const ErasedFunction& f,
                                const AxisLine& line) {
  const Domain& domain = f.domain();
  std::vector<PointValue> values;
  values.reserve(domain.side());
  for (std::uint64_t pos = 0; pos < domain.side(); ++pos) {
    values.push_back(f.at(line.point(domain, pos)));
  }
  return ErasedFunction(Domain::line(domain.side()), std::move(values))
      .with_modulus(f.modulus());
}

}  // namespace ert
