#include "ert/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ert/errors.hpp"

namespace ert {
namespace {

// Whitespace-separated tokens with `#` comments removed.
class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) tokens_.push_back(tok);
    }
  }
  bool done() const { return pos_ >= tokens_.size(); }
  const std::string& peek() const {
    if (done()) throw ParseError("unexpected end of input");
    return tokens_[pos_];
  }
  std::string next() {
    const std::string& t = peek();
    ++pos_;
    return t;
  }
  void expect(const std::string& word) {
    const std::string t = next();
    if (t != word) throw ParseError("expected '" + word + "', got '" + t + "'");
  }
  std::uint64_t next_uint() {
    const std::string t = next();
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size()) {
      throw ParseError("expected a nonnegative integer, got '" + t + "'");
    }
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

double parse_real(const std::string& t) {
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  if (t.find('/') != std::string::npos) return Rational::parse(t).to_double();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + t + "'");
  }
  if (used != t.size()) throw ParseError("bad number '" + t + "'");
  return v;
}

std::int64_t parse_int(const std::string& t) {
  std::int64_t v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size()) {
    throw ParseError("expected an integer, got '" + t + "'");
  }
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

ErasedFunction parse_function(std::istream& in) {
  Tokens tok(in);
  tok.expect("domain");
  const std::string shape = tok.next();
  std::uint64_t n = 0;
  std::uint32_t d = 1;
  if (shape == "line") {
    n = tok.next_uint();
  } else if (shape == "grid") {
    n = tok.next_uint();
    d = static_cast<std::uint32_t>(tok.next_uint());
  } else {
    throw ParseError("unknown domain shape '" + shape + "'");
  }
  const Domain domain(n, d);
  ValueKind kind = ValueKind::Real;
  std::int64_t modulus = 0;
  if (!tok.done() && tok.peek() == "values") {
    tok.next();
    const std::string k = tok.next();
    if (k == "real") {
      kind = ValueKind::Real;
    } else if (k == "bit") {
      kind = ValueKind::Bit;
    } else if (k == "field") {
      kind = ValueKind::Field;
      modulus = static_cast<std::int64_t>(tok.next_uint());
      if (!is_prime(modulus)) throw InvalidField("field modulus must be prime");
    } else {
      throw ParseError("unknown value kind '" + k + "'");
    }
  }
  std::vector<PointValue> values;
  values.reserve(domain.size());
  for (Index i = 0; i < domain.size(); ++i) {
    const std::string t = tok.next();
    if (t == "_") {
      values.push_back(PointValue::erased());
      continue;
    }
    switch (kind) {
      case ValueKind::Real: values.push_back(PointValue::real(parse_real(t))); break;
      case ValueKind::Bit: {
        const std::int64_t b = parse_int(t);
        if (b != 0 && b != 1) throw ParseError("bit values must be 0 or 1");
        values.push_back(PointValue::bit(static_cast<int>(b)));
        break;
      }
      case ValueKind::Field: {
        const std::int64_t v = parse_int(t);
        if (v < 0 || v >= modulus) throw ParseError("field value out of range");
        values.push_back(PointValue::field(v));
        break;
      }
    }
  }
  if (!tok.done()) throw ParseError("trailing tokens after the last point");
  ErasedFunction f(domain, std::move(values));
  return kind == ValueKind::Field ? f.with_modulus(modulus) : f;
}

ErasedFunction read_function_file(const std::string& path) {
  auto in = open_in(path);
  return parse_function(in);
}

void write_function(std::ostream& out, const ErasedFunction& f) {
  const Domain& domain = f.domain();
  if (domain.is_line()) {
    out << "domain line " << domain.side() << '\n';
  } else {
    out << "domain grid " << domain.side() << ' ' << domain.dims() << '\n';
  }
  switch (f.kind()) {
    case ValueKind::Real: out << "values real\n"; break;
    case ValueKind::Bit: out << "values bit\n"; break;
    case ValueKind::Field: out << "values field " << f.modulus() << '\n'; break;
  }
  for (Index i = 0; i < domain.size(); ++i) {
    if (f.is_erased(i)) {
      out << '_';
    } else if (f.kind() == ValueKind::Real) {
      out << format_double(f.value(i));
    } else {
      out << f.at(i).as_int();
    }
    out << (((i + 1) % domain.side() == 0) ? '\n' : ' ');
  }
}

void write_function_file(const std::string& path, const ErasedFunction& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_function(out, f);
}

BoundingFamily parse_bounds(std::istream& in) {
  Tokens tok(in);
  tok.expect("bounds");
  const auto d = static_cast<std::uint32_t>(tok.next_uint());
  const std::uint64_t n = tok.next_uint();
  if (d == 0 || n == 0) throw ParseError("bounds need d >= 1 and n >= 1");
  std::vector<StepBounds> dims;
  for (std::uint32_t r = 0; r < d; ++r) {
    std::vector<double> lower(n - 1);
    std::vector<double> upper(n - 1);
    for (auto& x : lower) x = parse_real(tok.next());
    for (auto& x : upper) x = parse_real(tok.next());
    try {
      dims.emplace_back(std::move(lower), std::move(upper));
    } catch (const PreconditionViolated& e) {
      throw ParseError(e.what());
    }
  }
  if (!tok.done()) throw ParseError("trailing tokens in bounds file");
  return BoundingFamily(std::move(dims));
}

BoundingFamily read_bounds_file(const std::string& path) {
  auto in = open_in(path);
  return parse_bounds(in);
}

void write_bounds(std::ostream& out, const BoundingFamily& b) {
  out << "bounds " << b.dims() << ' ' << b.side() << '\n';
  for (std::uint32_t r = 0; r < b.dims(); ++r) {
    for (const auto* row : {&b.dim(r).lower_steps(), &b.dim(r).upper_steps()}) {
      for (std::size_t t = 0; t < row->size(); ++t) {
        out << (t ? " " : "") << format_double((*row)[t]);
      }
      out << '\n';
    }
  }
}

Poset parse_poset(std::istream& in) {
  Tokens tok(in);
  tok.expect("poset");
  const auto n = static_cast<std::uint32_t>(tok.next_uint());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  while (!tok.done()) {
    const auto u = static_cast<std::uint32_t>(tok.next_uint());
    const auto v = static_cast<std::uint32_t>(tok.next_uint());
    edges.emplace_back(u, v);
  }
  try {
    return Poset(n, edges);
  } catch (const PreconditionViolated& e) {
    throw ParseError(e.what());
  }
}

Poset read_poset_file(const std::string& path) {
  auto in = open_in(path);
  return parse_poset(in);
}

void write_poset(std::ostream& out, const Poset& p) {
  out << "poset " << p.size() << '\n';
  for (const auto& [u, v] : p.edges()) out << u << ' ' << v << '\n';
}

ErasedFunction coerce_kind(const ErasedFunction& f, ValueKind kind,
                           std::int64_t modulus) {
  if (f.kind() == kind && (kind != ValueKind::Field || modulus == 0 ||
                           modulus == f.modulus())) {
    return f;
  }
  std::vector<PointValue> values;
  values.reserve(f.domain().size());
  for (Index i = 0; i < f.domain().size(); ++i) {
    if (f.is_erased(i)) {
      values.push_back(PointValue::erased());
      continue;
    }
    const double v = f.value(i);
    switch (kind) {
      case ValueKind::Real: values.push_back(PointValue::real(v)); break;
      case ValueKind::Bit:
        if (v != 0.0 && v != 1.0) throw ParseError("value is not a bit");
        values.push_back(PointValue::bit(v != 0.0));
        break;
      case ValueKind::Field:
        if (modulus < 2 || v != std::floor(v) || v < 0 ||
            v >= static_cast<double>(modulus)) {
          throw ParseError("value is not a field element");
        }
        values.push_back(PointValue::field(static_cast<std::int64_t>(v)));
        break;
    }
  }
  ErasedFunction out(f.domain(), std::move(values), f.declared_alpha());
  return kind == ValueKind::Field ? out.with_modulus(modulus) : out;
}

nlohmann::json to_json(const DistanceReport& r) {
  nlohmann::json j;
  j["property"] = r.property;
  j["absolute"] = r.absolute;
  j["total"] = r.total;
  j["relative"] = r.relative.str();
  j["relative_value"] = r.relative.to_double();
  j["exact"] = r.exact;
  j["kept"] = r.kept;
  if (r.matching_lower_bound) {
    j["matching_lower_bound"] = *r.matching_lower_bound;
  }
  return j;
}

DistanceReport distance_report_from_json(const nlohmann::json& j) {
  DistanceReport r;
  r.property = j.at("property").get<std::string>();
  r.absolute = j.at("absolute").get<std::uint64_t>();
  r.total = j.at("total").get<std::uint64_t>();
  r.relative = Rational::parse(j.at("relative").get<std::string>());
  r.exact = j.value("exact", true);
  r.kept = j.at("kept").get<std::vector<Index>>();
  if (j.contains("matching_lower_bound")) {
    r.matching_lower_bound = j["matching_lower_bound"].get<std::uint64_t>();
  }
  return r;
}

nlohmann::json to_json(const Certificate& c) {
  const char* kind = "none";
  switch (c.kind) {
    case Certificate::Kind::None: kind = "none"; break;
    case Certificate::Kind::ViolatedPair: kind = "violated-pair"; break;
    case Certificate::Kind::SlopeChain: kind = "slope-chain"; break;
    case Certificate::Kind::Sample: kind = "sample"; break;
  }
  return {{"kind", kind}, {"points", c.points}};
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["outcome"] = to_string(v.outcome);
  j["reason"] = to_string(v.reason);
  j["queries_used"] = v.queries_used;
  j["walking_queries"] = v.walking_queries;
  if (v.rejected()) j["certificate"] = to_json(v.certificate);
  return j;
}

}  // namespace ert
