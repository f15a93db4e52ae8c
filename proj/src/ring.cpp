#include "ring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <mutex>
#include <map>
#include <numeric>
#include <sstream>

#include "fp.hpp"
#include "groebner.hpp"

namespace stabcx {

void fail(Err code, const std::string& msg) { throw StabError(code, msg); }

uint32_t pow_mod(uint64_t a, uint64_t e, uint32_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return uint32_t(r);
}

uint32_t inv_mod(uint32_t a, uint32_t p) {
  if (a % p == 0) fail(Err::Argument, "inverse of zero mod p");
  return pow_mod(a, p - 2, p);
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

static uint32_t mod_of(const mpz_class& n, uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), n.get_mpz_t(), p);
  return uint32_t(r.get_ui());
}

// ---------------------------------------------------------------- parsing

namespace {
struct Parser {
  const Ring& R;
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void bad(const std::string& what) {
    fail(Err::Parse, "cannot parse element '" + s + "' over " + R.name() + ": " + what);
  }
  Elem expr() {
    ws();
    Elem a = term();
    for (;;) {
      ws();
      if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        char op = s[i++];
        Elem b = term();
        a = op == '+' ? R.add(a, b) : R.sub(a, b);
      } else {
        return a;
      }
    }
  }
  Elem term() {
    Elem a = unary();
    for (;;) {
      ws();
      if (i < s.size() && (s[i] == '*' || s[i] == '/')) {
        char op = s[i++];
        Elem b = unary();
        if (op == '*') {
          a = R.mul(a, b);
        } else {
          auto q = R.div(a, b);
          if (!q) bad("inexact division");
          a = *q;
        }
      } else {
        return a;
      }
    }
  }
  Elem unary() {
    ws();
    if (i < s.size() && s[i] == '-') {
      ++i;
      return R.neg(unary());
    }
    if (i < s.size() && s[i] == '+') {
      ++i;
      return unary();
    }
    return power();
  }
  Elem power() {
    Elem a = atom();
    ws();
    if (i < s.size() && s[i] == '^') {
      ++i;
      ws();
      size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (st == i) bad("exponent");
      unsigned long e = std::stoul(s.substr(st, i - st));
      Elem r = R.one();
      for (unsigned long k = 0; k < e; ++k) r = R.mul(r, a);
      return r;
    }
    return a;
  }
  Elem atom() {
    ws();
    if (i >= s.size()) bad("unexpected end");
    if (s[i] == '(') {
      ++i;
      Elem a = expr();
      ws();
      if (i >= s.size() || s[i] != ')') bad("missing )");
      ++i;
      return a;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      size_t st = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      return R.from_int(mpz_class(s.substr(st, i - st)));
    }
    if (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_') {
      size_t st = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      auto a = R.atom(s.substr(st, i - st));
      if (!a) bad("unknown name '" + s.substr(st, i - st) + "'");
      return *a;
    }
    bad(std::string("unexpected '") + s[i] + "'");
  }
};
}  // namespace

Elem Ring::parse(const std::string& s) const {
  Parser ps{*this, s};
  Elem e = ps.expr();
  ps.ws();
  if (ps.i != s.size()) ps.bad("trailing input");
  return e;
}

bool Ring::norm_less(const Elem&, const Elem&) const { fail(Err::Unsupported, name() + " is not euclidean"); }
void Ring::divmod(const Elem&, const Elem&, Elem&, Elem&) const {
  fail(Err::Unsupported, name() + " is not euclidean");
}
Elem Ring::unit_normal(const Elem& a) const {
  if (is_unit(a)) return inv(a);
  return one();
}

// ---------------------------------------------------------------- F_p

PrimeField::PrimeField(uint32_t p_) {
  if (!is_prime(p_)) fail(Err::Validation, "p = " + std::to_string(p_) + " is not prime");
  p = p_;
  kind = Kind::PrimeField;
  backend = Backend::Field;
  flags = {true, true, true, true, true, true};
}
Elem PrimeField::from_int(const mpz_class& n) const { return mod_of(n, p); }
Elem PrimeField::add(const Elem& a, const Elem& b) const {
  return uint32_t((uint64_t(std::get<uint32_t>(a)) + std::get<uint32_t>(b)) % p);
}
Elem PrimeField::neg(const Elem& a) const {
  uint32_t v = std::get<uint32_t>(a);
  return v ? p - v : 0u;
}
Elem PrimeField::mul(const Elem& a, const Elem& b) const {
  return uint32_t(uint64_t(std::get<uint32_t>(a)) * std::get<uint32_t>(b) % p);
}
Elem PrimeField::inv(const Elem& a) const { return inv_mod(std::get<uint32_t>(a), p); }
std::optional<Elem> PrimeField::div(const Elem& a, const Elem& b) const {
  if (is_zero(b)) return is_zero(a) ? std::optional<Elem>(zero()) : std::nullopt;
  return mul(a, inv(b));
}
std::string PrimeField::str(const Elem& a) const { return std::to_string(std::get<uint32_t>(a)); }
json PrimeField::to_json() const { return {{"kind", "prime-field"}, {"p", p}}; }
std::string PrimeField::name() const { return "F" + std::to_string(p); }

// ---------------------------------------------------------------- Q

Rationals::Rationals() {
  kind = Kind::Rationals;
  backend = Backend::Field;
  flags = {true, true, true, true, true, true};
}
Elem Rationals::add(const Elem& a, const Elem& b) const {
  return mpq_class(std::get<mpq_class>(a) + std::get<mpq_class>(b));
}
Elem Rationals::neg(const Elem& a) const { return mpq_class(-std::get<mpq_class>(a)); }
Elem Rationals::mul(const Elem& a, const Elem& b) const {
  return mpq_class(std::get<mpq_class>(a) * std::get<mpq_class>(b));
}
Elem Rationals::inv(const Elem& a) const { return mpq_class(1 / std::get<mpq_class>(a)); }
std::optional<Elem> Rationals::div(const Elem& a, const Elem& b) const {
  if (is_zero(b)) return is_zero(a) ? std::optional<Elem>(zero()) : std::nullopt;
  return mpq_class(std::get<mpq_class>(a) / std::get<mpq_class>(b));
}
std::string Rationals::str(const Elem& a) const { return std::get<mpq_class>(a).get_str(); }

// ---------------------------------------------------------------- Z

Integers::Integers() {
  kind = Kind::Integers;
  backend = Backend::Euclid;
  flags.euclidean = true;
  flags.domain = true;
  flags.gen_gorenstein = true;
}
Elem Integers::add(const Elem& a, const Elem& b) const {
  return mpz_class(std::get<mpz_class>(a) + std::get<mpz_class>(b));
}
Elem Integers::neg(const Elem& a) const { return mpz_class(-std::get<mpz_class>(a)); }
Elem Integers::mul(const Elem& a, const Elem& b) const {
  return mpz_class(std::get<mpz_class>(a) * std::get<mpz_class>(b));
}
bool Integers::is_unit(const Elem& a) const { return abs(std::get<mpz_class>(a)) == 1; }
Elem Integers::inv(const Elem& a) const {
  if (!is_unit(a)) fail(Err::Argument, "not a unit in ZZ");
  return a;
}
std::optional<Elem> Integers::div(const Elem& a, const Elem& b) const {
  const auto& x = std::get<mpz_class>(a);
  const auto& y = std::get<mpz_class>(b);
  if (sgn(y) == 0) return sgn(x) == 0 ? std::optional<Elem>(zero()) : std::nullopt;
  if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t())) return std::nullopt;
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return q;
}
bool Integers::norm_less(const Elem& a, const Elem& b) const {
  return mpz_cmpabs(std::get<mpz_class>(a).get_mpz_t(), std::get<mpz_class>(b).get_mpz_t()) < 0;
}
void Integers::divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) const {
  const auto& x = std::get<mpz_class>(a);
  const auto& y = std::get<mpz_class>(b);
  mpz_class qq, rr;
  mpz_tdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  // symmetric remainder keeps coefficient growth down
  mpz_class twice = 2 * abs(rr);
  if (twice > abs(y)) {
    if (sgn(rr) == sgn(y)) {
      rr -= y;
      qq += 1;
    } else {
      rr += y;
      qq -= 1;
    }
  }
  q = qq;
  r = rr;
}
Elem Integers::unit_normal(const Elem& a) const {
  return mpz_class(sgn(std::get<mpz_class>(a)) < 0 ? -1 : 1);
}
RingP Integers::fraction_ring() const {
  static RingP q = ring_rationals();
  return q;
}

// ---------------------------------------------------------------- F_p[t] helpers

namespace up {
void trim(UPoly& a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}
int deg(const UPoly& a) { return int(a.c.size()) - 1; }
UPoly add(const UPoly& a, const UPoly& b, uint32_t p) {
  UPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i) {
    uint64_t s = (i < a.c.size() ? a.c[i] : 0) + uint64_t(i < b.c.size() ? b.c[i] : 0);
    r.c[i] = uint32_t(s % p);
  }
  trim(r);
  return r;
}
UPoly scale(const UPoly& a, uint32_t s, uint32_t p) {
  UPoly r;
  r.c.resize(a.c.size());
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = uint32_t(uint64_t(a.c[i]) * s % p);
  trim(r);
  return r;
}
UPoly sub(const UPoly& a, const UPoly& b, uint32_t p) { return add(a, scale(b, p - 1, p), p); }
UPoly mul(const UPoly& a, const UPoly& b, uint32_t p) {
  if (a.c.empty() || b.c.empty()) return {};
  UPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (!a.c[i]) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = uint32_t((r.c[i + j] + uint64_t(a.c[i]) * b.c[j]) % p);
  }
  trim(r);
  return r;
}
void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r, uint32_t p) {
  if (b.c.empty()) fail(Err::Argument, "polynomial division by zero");
  r = a;
  q.c.clear();
  int db = deg(b);
  uint64_t il = inv_mod(b.c.back(), p);
  if (deg(r) >= db) q.c.assign(size_t(deg(r) - db + 1), 0);
  while (!r.c.empty() && deg(r) >= db) {
    int sh = deg(r) - db;
    uint32_t f = uint32_t(r.c.back() * il % p);
    q.c[size_t(sh)] = f;
    for (int j = 0; j <= db; ++j) {
      uint64_t v = r.c[size_t(j + sh)] + uint64_t(p - f) * b.c[size_t(j)] % p;
      r.c[size_t(j + sh)] = uint32_t(v % p);
    }
    trim(r);
  }
  trim(q);
}
UPoly monic(const UPoly& a, uint32_t p) {
  if (a.c.empty()) return a;
  return scale(a, inv_mod(a.c.back(), p), p);
}
UPoly gcd(UPoly a, UPoly b, uint32_t p) {
  while (!b.c.empty()) {
    UPoly q, r;
    divmod(a, b, q, r, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}
std::string str(const UPoly& a, const std::string& var) {
  if (a.c.empty()) return "0";
  std::string out;
  for (int i = deg(a); i >= 0; --i) {
    uint32_t c = a.c[size_t(i)];
    if (!c) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c) + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}
}  // namespace up

// ---------------------------------------------------------------- F_p[t]

UnivPolyRing::UnivPolyRing(uint32_t p_, std::string v) : var(std::move(v)) {
  if (!is_prime(p_)) fail(Err::Validation, "p = " + std::to_string(p_) + " is not prime");
  p = p_;
  kind = Kind::UnivPoly;
  backend = Backend::Euclid;
  flags.euclidean = true;
  flags.domain = true;
  flags.gen_gorenstein = true;
}
Elem UnivPolyRing::from_int(const mpz_class& n) const {
  UPoly r{{mod_of(n, p)}};
  up::trim(r);
  return r;
}
Elem UnivPolyRing::add(const Elem& a, const Elem& b) const {
  return up::add(std::get<UPoly>(a), std::get<UPoly>(b), p);
}
Elem UnivPolyRing::neg(const Elem& a) const { return up::scale(std::get<UPoly>(a), p - 1, p); }
Elem UnivPolyRing::mul(const Elem& a, const Elem& b) const {
  return up::mul(std::get<UPoly>(a), std::get<UPoly>(b), p);
}
Elem UnivPolyRing::inv(const Elem& a) const {
  if (!is_unit(a)) fail(Err::Argument, "not a unit in " + name());
  return UPoly{{inv_mod(std::get<UPoly>(a).c[0], p)}};
}
std::optional<Elem> UnivPolyRing::div(const Elem& a, const Elem& b) const {
  const auto& x = std::get<UPoly>(a);
  const auto& y = std::get<UPoly>(b);
  if (y.c.empty()) return x.c.empty() ? std::optional<Elem>(zero()) : std::nullopt;
  UPoly q, r;
  up::divmod(x, y, q, r, p);
  if (!r.c.empty()) return std::nullopt;
  return q;
}
std::optional<Elem> UnivPolyRing::atom(const std::string& s) const {
  if (s == var) return UPoly{{0, 1}};
  return std::nullopt;
}
json UnivPolyRing::to_json() const {
  return {{"kind", "univariate-poly"}, {"field", {{"kind", "prime-field"}, {"p", p}}}, {"var", var}};
}
std::string UnivPolyRing::name() const { return "F" + std::to_string(p) + "[" + var + "]"; }
bool UnivPolyRing::norm_less(const Elem& a, const Elem& b) const {
  return std::get<UPoly>(a).c.size() < std::get<UPoly>(b).c.size();
}
void UnivPolyRing::divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) const {
  UPoly qq, rr;
  up::divmod(std::get<UPoly>(a), std::get<UPoly>(b), qq, rr, p);
  q = qq;
  r = rr;
}
Elem UnivPolyRing::unit_normal(const Elem& a) const {
  const auto& x = std::get<UPoly>(a);
  if (x.c.empty()) return one();
  return UPoly{{inv_mod(x.c.back(), p)}};
}
RingP UnivPolyRing::fraction_ring() const { return std::make_shared<RatFuncField>(p, var); }
Elem UnivPolyRing::to_fraction(const Elem& a) const { return RatFn{std::get<UPoly>(a), UPoly{{1}}}; }

// ---------------------------------------------------------------- F_p(t)

RatFuncField::RatFuncField(uint32_t p_, std::string v) : var(std::move(v)) {
  p = p_;
  kind = Kind::RatFunc;
  backend = Backend::Field;
  flags = {true, true, true, true, true, true};
}
RatFn RatFuncField::make(UPoly n, UPoly d) const {
  if (d.c.empty()) fail(Err::Argument, "zero denominator");
  if (n.c.empty()) return RatFn{{}, {{1}}};
  UPoly g = up::gcd(n, d, p);
  UPoly q, r;
  up::divmod(n, g, q, r, p);
  n = q;
  up::divmod(d, g, q, r, p);
  d = q;
  uint32_t il = inv_mod(d.c.back(), p);
  return RatFn{up::scale(n, il, p), up::scale(d, il, p)};
}
Elem RatFuncField::from_int(const mpz_class& n) const {
  UPoly a{{mod_of(n, p)}};
  up::trim(a);
  return RatFn{a, {{1}}};
}
Elem RatFuncField::add(const Elem& a, const Elem& b) const {
  const auto& x = std::get<RatFn>(a);
  const auto& y = std::get<RatFn>(b);
  if (x.den == y.den) return make(up::add(x.num, y.num, p), x.den);
  return make(up::add(up::mul(x.num, y.den, p), up::mul(y.num, x.den, p), p), up::mul(x.den, y.den, p));
}
Elem RatFuncField::neg(const Elem& a) const {
  const auto& x = std::get<RatFn>(a);
  return RatFn{up::scale(x.num, p - 1, p), x.den};
}
Elem RatFuncField::mul(const Elem& a, const Elem& b) const {
  const auto& x = std::get<RatFn>(a);
  const auto& y = std::get<RatFn>(b);
  return make(up::mul(x.num, y.num, p), up::mul(x.den, y.den, p));
}
Elem RatFuncField::inv(const Elem& a) const {
  const auto& x = std::get<RatFn>(a);
  return make(x.den, x.num);
}
std::optional<Elem> RatFuncField::div(const Elem& a, const Elem& b) const {
  if (is_zero(b)) return is_zero(a) ? std::optional<Elem>(zero()) : std::nullopt;
  return mul(a, inv(b));
}
std::string RatFuncField::str(const Elem& a) const {
  const auto& x = std::get<RatFn>(a);
  if (x.den.c.size() == 1) return up::str(x.num, var);
  return "(" + up::str(x.num, var) + ")/(" + up::str(x.den, var) + ")";
}
std::optional<Elem> RatFuncField::atom(const std::string& s) const {
  if (s == var) return RatFn{{{0, 1}}, {{1}}};
  return std::nullopt;
}
json RatFuncField::to_json() const {
  return {{"kind", "rational-functions"}, {"field", {{"kind", "prime-field"}, {"p", p}}}, {"var", var}};
}
std::string RatFuncField::name() const { return "F" + std::to_string(p) + "(" + var + ")"; }

// ---------------------------------------------------------------- local algebras

QuotientAlgebra::QuotientAlgebra(uint32_t p_, std::vector<std::string> b, std::vector<uint32_t> t,
                                 std::vector<uint32_t> u, std::vector<size_t> mb)
    : dim(b.size()), basis(std::move(b)), table(std::move(t)), unit(std::move(u)), mbasis(std::move(mb)) {
  if (!is_prime(p_)) fail(Err::Validation, "p = " + std::to_string(p_) + " is not prime");
  p = p_;
  kind = Kind::Quotient;
  backend = Backend::Local;
  if (dim == 0) fail(Err::Validation, "quotient algebra of dimension 0");
  if (table.size() != dim * dim * dim || unit.size() != dim)
    fail(Err::Validation, "multiplication table has wrong size");
  for (auto& x : table) x %= p;
  for (auto& x : unit) x %= p;
  auto T = [&](size_t i, size_t j, size_t k) { return table[(i * dim + j) * dim + k]; };
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j)
      for (size_t k = 0; k < dim; ++k)
        if (T(i, j, k) != T(j, i, k))
          fail(Err::Validation, "multiplication table is not commutative at (" + basis[i] + "," + basis[j] + ")");
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j)
      for (size_t k = 0; k < dim; ++k) {
        Elem l = mul(mul(basis_elem(i), basis_elem(j)), basis_elem(k));
        Elem r = mul(basis_elem(i), mul(basis_elem(j), basis_elem(k)));
        if (!(std::get<AVec>(l) == std::get<AVec>(r)))
          fail(Err::Validation, "multiplication table is not associative at (" + basis[i] + "," + basis[j] + "," +
                                    basis[k] + ")");
      }
  for (size_t i = 0; i < dim; ++i)
    if (!(std::get<AVec>(mul(one(), basis_elem(i))) == std::get<AVec>(basis_elem(i))))
      fail(Err::Validation, "designated unit does not act as identity on " + basis[i]);
  // maximal ideal: codimension one, an ideal, nilpotent
  if (mbasis.size() + 1 != dim) fail(Err::Validation, "maximal ideal must have codimension one");
  FpSpan m(p, dim);
  for (auto i : mbasis) {
    if (i >= dim) fail(Err::Validation, "maximal ideal index out of range");
    m.add(std::get<AVec>(basis_elem(i)).c);
  }
  if (m.dim() != mbasis.size()) fail(Err::Validation, "maximal ideal basis is dependent");
  if (m.contains(unit)) fail(Err::Validation, "maximal ideal contains the unit");
  for (auto i : mbasis)
    for (size_t j = 0; j < dim; ++j)
      if (!m.contains(std::get<AVec>(mul(basis_elem(i), basis_elem(j))).c))
        fail(Err::Validation, "maximal ideal is not an ideal");
  std::vector<std::vector<uint32_t>> pw;
  for (auto i : mbasis) pw.push_back(std::get<AVec>(basis_elem(i)).c);
  for (size_t step = 0; step <= dim && !pw.empty(); ++step) {
    FpSpan nx(p, dim);
    for (auto& v : pw)
      for (auto i : mbasis) nx.add(std::get<AVec>(mul(AVec{v}, basis_elem(i))).c);
    std::vector<std::vector<uint32_t>> nv;
    for (auto& v : pw)
      for (auto i : mbasis) {
        auto w = std::get<AVec>(mul(AVec{v}, basis_elem(i))).c;
        bool nz = std::any_of(w.begin(), w.end(), [](uint32_t x) { return x != 0; });
        if (nz) nv.push_back(w);
      }
    pw.clear();
    FpSpan dedup(p, dim);
    for (auto& v : nv)
      if (dedup.add(v)) pw.push_back(v);
  }
  if (!pw.empty()) fail(Err::Validation, "maximal ideal is not nilpotent");
  // socle = common kernel of multiplication by the m-basis
  FpMat S(p, dim * mbasis.size(), dim);
  for (size_t a = 0; a < mbasis.size(); ++a) {
    auto L = mult_matrix(basis_elem(mbasis[a]));
    for (size_t r = 0; r < dim; ++r)
      for (size_t c = 0; c < dim; ++c) S.at(a * dim + r, c) = L[r * dim + c];
  }
  socle_dim = dim - fp_rank(S);
  flags.artinian_local = true;
  flags.field = dim == 1;
  flags.domain = dim == 1;
  flags.euclidean = dim == 1;
  flags.gorenstein0 = socle_dim == 1;
  flags.gen_gorenstein = socle_dim == 1;
}

Elem QuotientAlgebra::basis_elem(size_t i) const {
  AVec v{std::vector<uint32_t>(dim, 0)};
  v.c[i] = 1;
  return v;
}
Elem QuotientAlgebra::from_int(const mpz_class& n) const {
  uint32_t s = mod_of(n, p);
  AVec v{unit};
  for (auto& x : v.c) x = uint32_t(uint64_t(x) * s % p);
  return v;
}
Elem QuotientAlgebra::add(const Elem& a, const Elem& b) const {
  const auto& x = std::get<AVec>(a).c;
  const auto& y = std::get<AVec>(b).c;
  AVec r{std::vector<uint32_t>(dim)};
  for (size_t i = 0; i < dim; ++i) r.c[i] = uint32_t((uint64_t(x[i]) + y[i]) % p);
  return r;
}
Elem QuotientAlgebra::neg(const Elem& a) const {
  AVec r = std::get<AVec>(a);
  for (auto& x : r.c) x = x ? p - x : 0;
  return r;
}
Elem QuotientAlgebra::mul(const Elem& a, const Elem& b) const {
  const auto& x = std::get<AVec>(a).c;
  const auto& y = std::get<AVec>(b).c;
  std::vector<uint64_t> acc(dim, 0);
  for (size_t i = 0; i < dim; ++i) {
    if (!x[i]) continue;
    for (size_t j = 0; j < dim; ++j) {
      if (!y[j]) continue;
      uint64_t f = uint64_t(x[i]) * y[j] % p;
      const uint32_t* t = &table[(i * dim + j) * dim];
      for (size_t k = 0; k < dim; ++k)
        if (t[k]) acc[k] = (acc[k] + f * t[k]) % p;
    }
  }
  AVec r{std::vector<uint32_t>(dim)};
  for (size_t k = 0; k < dim; ++k) r.c[k] = uint32_t(acc[k]);
  return r;
}
bool QuotientAlgebra::is_zero(const Elem& a) const {
  for (auto x : std::get<AVec>(a).c)
    if (x) return false;
  return true;
}
std::vector<uint32_t> QuotientAlgebra::mult_matrix(const Elem& a) const {
  std::vector<uint32_t> L(dim * dim, 0);
  for (size_t j = 0; j < dim; ++j) {
    auto col = std::get<AVec>(mul(a, basis_elem(j))).c;
    for (size_t r = 0; r < dim; ++r) L[r * dim + j] = col[r];
  }
  return L;
}
bool QuotientAlgebra::is_unit(const Elem& a) const {
  FpMat M(p, dim, dim);
  M.a = mult_matrix(a);
  return fp_rank(M) == dim;
}
std::optional<Elem> QuotientAlgebra::div(const Elem& a, const Elem& b) const {
  FpMat M(p, dim, dim);
  M.a = mult_matrix(b);
  FpMat rhs(p, dim, 1);
  rhs.a = std::get<AVec>(a).c;
  auto x = fp_solve(M, rhs);
  if (!x) return std::nullopt;
  return AVec{x->a};
}
Elem QuotientAlgebra::inv(const Elem& a) const {
  auto x = div(one(), a);
  if (!x) fail(Err::Argument, "not a unit in " + name());
  return *x;
}
std::string QuotientAlgebra::str(const Elem& a) const {
  const auto& x = std::get<AVec>(a).c;
  std::string out;
  for (size_t i = 0; i < dim; ++i) {
    if (!x[i]) continue;
    if (!out.empty()) out += "+";
    if (basis[i] == "1") {
      out += std::to_string(x[i]);
    } else {
      if (x[i] != 1) out += std::to_string(x[i]) + "*";
      out += basis[i];
    }
  }
  return out.empty() ? "0" : out;
}
std::optional<Elem> QuotientAlgebra::atom(const std::string& s) const {
  for (size_t i = 0; i < dim; ++i)
    if (basis[i] == s) return basis_elem(i);
  return std::nullopt;
}
json QuotientAlgebra::to_json() const {
  json t = json::array();
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < dim; ++j)
      for (size_t k = 0; k < dim; ++k)
        if (table[(i * dim + j) * dim + k]) t.push_back({i, j, k, table[(i * dim + j) * dim + k]});
  return {{"kind", "quotient-algebra"},
          {"field", {{"kind", "prime-field"}, {"p", p}}},
          {"basis", basis},
          {"table", t},
          {"unit", unit},
          {"maximal_ideal", mbasis},
          {"label", name()}};
}
std::string QuotientAlgebra::name() const {
  if (!label.empty()) return label;
  return "F" + std::to_string(p) + "-algebra(dim " + std::to_string(dim) + ")";
}

// ---------------------------------------------------------------- polynomial rings

PolyRing::PolyRing(uint32_t p_, std::vector<std::string> v, MonoOrder o) : vars(std::move(v)), order(o) {
  if (!is_prime(p_)) fail(Err::Validation, "p = " + std::to_string(p_) + " is not prime");
  if (vars.empty()) fail(Err::Validation, "polynomial ring needs at least one variable");
  p = p_;
  kind = Kind::PolyRing;
  backend = Backend::Poly;
  flags.domain = true;
  flags.gen_gorenstein = true;
}
int PolyRing::cmp(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const {
  size_t n = vars.size();
  if (order != MonoOrder::Lex) {
    uint64_t da = 0, db = 0;
    for (size_t i = 0; i < n; ++i) {
      da += a[i];
      db += b[i];
    }
    if (da != db) return da > db ? 1 : -1;
  }
  if (order == MonoOrder::GrevLex) {
    for (size_t i = n; i-- > 0;)
      if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    return 0;
  }
  for (size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  return 0;
}
MPoly PolyRing::monomial(const std::vector<uint32_t>& e, uint32_t c) const {
  MPoly r;
  if (c % p) r.t.push_back({e, c % p});
  return r;
}
Elem PolyRing::one() const { return monomial(std::vector<uint32_t>(vars.size(), 0), 1); }
Elem PolyRing::from_int(const mpz_class& n) const {
  return monomial(std::vector<uint32_t>(vars.size(), 0), mod_of(n, p));
}
Elem PolyRing::add(const Elem& a, const Elem& b) const {
  const auto& x = std::get<MPoly>(a).t;
  const auto& y = std::get<MPoly>(b).t;
  MPoly r;
  r.t.reserve(x.size() + y.size());
  size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    int c = i == x.size() ? -1 : j == y.size() ? 1 : cmp(x[i].e, y[j].e);
    if (c > 0) {
      r.t.push_back(x[i++]);
    } else if (c < 0) {
      r.t.push_back(y[j++]);
    } else {
      uint32_t s = uint32_t((uint64_t(x[i].c) + y[j].c) % p);
      if (s) r.t.push_back({x[i].e, s});
      ++i;
      ++j;
    }
  }
  return r;
}
Elem PolyRing::neg(const Elem& a) const {
  MPoly r = std::get<MPoly>(a);
  for (auto& t : r.t) t.c = p - t.c;
  return r;
}
MPoly PolyRing::scale_mono(const MPoly& a, const std::vector<uint32_t>& e, uint32_t c) const {
  MPoly r;
  if (c % p == 0) return r;
  r.t.reserve(a.t.size());
  for (const auto& t : a.t) {
    Term u{t.e, uint32_t(uint64_t(t.c) * c % p)};
    for (size_t i = 0; i < e.size(); ++i) u.e[i] += e[i];
    r.t.push_back(std::move(u));
  }
  return r;  // monomial orders are multiplicative, so order is preserved
}
Elem PolyRing::mul(const Elem& a, const Elem& b) const {
  const auto& x = std::get<MPoly>(a);
  const auto& y = std::get<MPoly>(b);
  Elem r = zero();
  for (const auto& t : x.t) r = add(r, scale_mono(y, t.e, t.c));
  return r;
}
bool PolyRing::is_unit(const Elem& a) const {
  const auto& x = std::get<MPoly>(a).t;
  if (x.size() != 1) return false;
  for (auto e : x[0].e)
    if (e) return false;
  return true;
}
Elem PolyRing::inv(const Elem& a) const {
  if (!is_unit(a)) fail(Err::Argument, "not a unit in " + name());
  return monomial(std::vector<uint32_t>(vars.size(), 0), inv_mod(std::get<MPoly>(a).t[0].c, p));
}
std::optional<Elem> PolyRing::div(const Elem& a, const Elem& b) const {
  const auto& y = std::get<MPoly>(b);
  if (y.t.empty()) return is_zero(a) ? std::optional<Elem>(zero()) : std::nullopt;
  MPoly r = std::get<MPoly>(a);
  Elem q = zero();
  uint32_t il = inv_mod(y.t[0].c, p);
  const auto& le = y.t[0].e;
  while (!r.t.empty()) {
    std::vector<uint32_t> e = r.t[0].e;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] < le[i]) return std::nullopt;
      e[i] -= le[i];
    }
    uint32_t c = uint32_t(uint64_t(r.t[0].c) * il % p);
    q = add(q, monomial(e, c));
    r = std::get<MPoly>(add(r, scale_mono(y, e, p - c)));
  }
  return q;
}
std::string PolyRing::str(const Elem& a) const {
  const auto& x = std::get<MPoly>(a).t;
  if (x.empty()) return "0";
  std::string out;
  for (const auto& t : x) {
    if (!out.empty()) out += "+";
    std::string mono;
    for (size_t i = 0; i < vars.size(); ++i) {
      if (!t.e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (t.e[i] > 1) mono += "^" + std::to_string(t.e[i]);
    }
    if (mono.empty()) {
      out += std::to_string(t.c);
    } else {
      if (t.c != 1) out += std::to_string(t.c) + "*";
      out += mono;
    }
  }
  return out;
}
std::optional<Elem> PolyRing::atom(const std::string& s) const {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == s) {
      std::vector<uint32_t> e(vars.size(), 0);
      e[i] = 1;
      return monomial(e, 1);
    }
  return std::nullopt;
}
static const char* order_name(MonoOrder o) {
  return o == MonoOrder::Lex ? "lex" : o == MonoOrder::GrLex ? "grlex" : "grevlex";
}
json PolyRing::to_json() const {
  return {{"kind", "poly-ring"}, {"field", {{"kind", "prime-field"}, {"p", p}}}, {"vars", vars},
          {"order", order_name(order)}};
}
std::string PolyRing::name() const {
  std::string s = "F" + std::to_string(p) + "[";
  for (size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + vars[i];
  return s + "]";
}

// ---------------------------------------------------------------- construction

RingP ring_integers() { return std::make_shared<Integers>(); }
RingP ring_rationals() { return std::make_shared<Rationals>(); }
RingP ring_prime_field(uint32_t p) { return std::make_shared<PrimeField>(p); }
RingP ring_univ_poly(uint32_t p, const std::string& var) { return std::make_shared<UnivPolyRing>(p, var); }
RingP ring_poly(uint32_t p, const std::vector<std::string>& vars, MonoOrder order) {
  return std::make_shared<PolyRing>(p, vars, order);
}

RingP ring_local_algebra(uint32_t p, const std::vector<std::string>& vars, const std::vector<std::string>& rels,
                         size_t trunc) {
  auto P = std::make_shared<PolyRing>(p, vars, MonoOrder::GrevLex);
  size_t n = vars.size();
  std::vector<MPoly> gens;
  for (const auto& r : rels) {
    MPoly f = std::get<MPoly>(P->parse(r));
    for (const auto& t : f.t) {
      bool constant = std::all_of(t.e.begin(), t.e.end(), [](uint32_t e) { return e == 0; });
      if (constant) fail(Err::Validation, "relation '" + r + "' is not in the maximal ideal");
    }
    if (!f.t.empty()) gens.push_back(f);
  }
  // all monomials of a given total degree
  auto monos_of_degree = [n](size_t d) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> e(n, 0);
    std::function<void(size_t, size_t)> rec = [&](size_t i, size_t left) {
      if (i + 1 == n) {
        e[i] = uint32_t(left);
        out.push_back(e);
        return;
      }
      for (size_t k = left + 1; k-- > 0;) {
        e[i] = uint32_t(k);
        rec(i + 1, left - k);
      }
    };
    rec(0, d);
    return out;
  };
  for (auto& e : monos_of_degree(trunc)) gens.push_back(P->monomial(e, 1));
  auto G = groebner_ideal(*P, gens);
  std::vector<std::vector<uint32_t>> std_monos;
  for (size_t d = 0; d < trunc; ++d)
    for (auto& e : monos_of_degree(d)) {
      bool divisible = false;
      for (const auto& g : G) {
        const auto& le = g.t[0].e;
        bool dv = true;
        for (size_t i = 0; i < n; ++i)
          if (le[i] > e[i]) dv = false;
        if (dv) divisible = true;
      }
      if (!divisible) std_monos.push_back(e);
    }
  size_t d = std_monos.size();
  if (d == 0) fail(Err::Validation, "relations generate the unit ideal");
  std::map<std::vector<uint32_t>, size_t> index;
  std::vector<std::string> names;
  for (size_t i = 0; i < d; ++i) {
    index[std_monos[i]] = i;
    std::string s = P->str(P->monomial(std_monos[i], 1));
    names.push_back(s);
  }
  std::vector<uint32_t> table(d * d * d, 0);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) {
      std::vector<uint32_t> e(n);
      for (size_t k = 0; k < n; ++k) e[k] = std_monos[i][k] + std_monos[j][k];
      MPoly nf = normal_form(*P, P->monomial(e, 1), G);
      for (const auto& t : nf.t) table[(i * d + j) * d + index.at(t.e)] = t.c;
    }
  std::vector<uint32_t> unit(d, 0);
  unit[0] = 1;
  std::vector<size_t> mb;
  for (size_t i = 1; i < d; ++i) mb.push_back(i);
  auto A = std::make_shared<QuotientAlgebra>(p, names, table, unit, mb);
  std::string label = "F" + std::to_string(p) + "[";
  for (size_t i = 0; i < n; ++i) label += (i ? "," : "") + vars[i];
  label += "]/(";
  bool first = true;
  for (const auto& r : rels) {
    label += (first ? "" : ",") + r;
    first = false;
  }
  // name the truncation only when the relations do not already imply it
  bool implied = !rels.empty();
  if (implied) {
    std::vector<MPoly> rg;
    for (const auto& r : rels) rg.push_back(std::get<MPoly>(P->parse(r)));
    auto RG = groebner_ideal(*P, rg);
    for (auto& e : monos_of_degree(trunc))
      if (!normal_form(*P, P->monomial(e, 1), RG).t.empty()) implied = false;
  }
  if (!implied) label += std::string(first ? "" : ",") + "deg>=" + std::to_string(trunc);
  label += ")";
  A->label = label;
  return A;
}

RingP ring_truncated(uint32_t p, size_t n, const std::string& var) {
  return ring_local_algebra(p, {var}, {var + "^" + std::to_string(n)}, n);
}

static uint32_t field_p(const json& f) {
  if (f.is_number_integer()) return f.get<uint32_t>();
  if (f.is_object()) {
    std::string k = f.value("kind", "");
    if (k == "prime-field") return f.at("p").get<uint32_t>();
    fail(Err::Unsupported, "base field of kind '" + k + "' is not supported (prime fields only)");
  }
  fail(Err::Validation, "malformed field descriptor");
}

static MonoOrder order_of(const std::string& s) {
  if (s == "lex") return MonoOrder::Lex;
  if (s == "grlex") return MonoOrder::GrLex;
  if (s == "grevlex") return MonoOrder::GrevLex;
  fail(Err::Validation, "unknown monomial order '" + s + "'");
}

static void check_declared_flags(const Ring& R, const json& j) {
  if (!j.contains("flags")) return;
  const auto& f = j.at("flags");
  auto chk = [&](const char* key, bool actual) {
    if (f.contains(key) && f.at(key).get<bool>() != actual)
      fail(Err::Validation, std::string("declared flag ") + key + " contradicts the computed value for " + R.name());
  };
  chk("is-field", R.flags.field);
  chk("is-artinian-local", R.flags.artinian_local);
  chk("is-domain", R.flags.domain);
  chk("is-gorenstein-dim-zero", R.flags.gorenstein0);
  if (R.flags.artinian_local) chk("is-generically-gorenstein", R.flags.gen_gorenstein);
}

RingP ring_from_json(const json& j) {
  if (j.is_string()) return ring_named(j.get<std::string>());
  if (!j.is_object()) fail(Err::Validation, "ring descriptor must be an object or a name");
  std::string k = j.value("kind", "");
  RingP R;
  if (k == "integers") {
    R = ring_integers();
  } else if (k == "rationals") {
    R = ring_rationals();
  } else if (k == "prime-field") {
    R = ring_prime_field(j.at("p").get<uint32_t>());
  } else if (k == "univariate-poly") {
    R = ring_univ_poly(field_p(j.at("field")), j.value("var", "t"));
  } else if (k == "poly-ring") {
    R = ring_poly(field_p(j.at("field")), j.at("vars").get<std::vector<std::string>>(),
                  order_of(j.value("order", "grevlex")));
  } else if (k == "quotient-algebra") {
    auto basis = j.at("basis").get<std::vector<std::string>>();
    size_t d = basis.size();
    std::vector<uint32_t> table(d * d * d, 0);
    for (const auto& e : j.at("table")) {
      auto i = e.at(0).get<size_t>(), a = e.at(1).get<size_t>(), b = e.at(2).get<size_t>();
      if (i >= d || a >= d || b >= d) fail(Err::Validation, "table index out of range");
      json c = e.at(3);
      uint32_t p = field_p(j.at("field"));
      int64_t cv = c.is_string() ? std::stoll(c.get<std::string>()) : c.get<int64_t>();
      table[(i * d + a) * d + b] = uint32_t(((cv % int64_t(p)) + p) % p);
    }
    std::vector<uint32_t> unit(d, 0);
    if (j.contains("unit")) {
      const auto& u = j.at("unit");
      if (u.is_number_integer()) {
        unit[u.get<size_t>()] = 1;
      } else {
        unit = u.get<std::vector<uint32_t>>();
      }
    } else {
      unit[0] = 1;
    }
    auto A = std::make_shared<QuotientAlgebra>(field_p(j.at("field")), basis, table, unit,
                                               j.at("maximal_ideal").get<std::vector<size_t>>());
    A->label = j.value("label", "");
    R = A;
  } else if (k == "local-algebra") {
    R = ring_local_algebra(field_p(j.at("field")), j.at("vars").get<std::vector<std::string>>(),
                           j.at("relations").get<std::vector<std::string>>(), j.at("truncate").get<size_t>());
  } else if (k == "named") {
    R = ring_named(j.at("name").get<std::string>());
  } else {
    fail(Err::Validation, "unknown ring kind '" + k + "'");
  }
  check_declared_flags(*R, j);
  return R;
}

RingP ring_named(const std::string& n) {
  static std::map<std::string, RingP> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  RingP R;
  if (n == "ZZ") {
    R = ring_integers();
  } else if (n == "QQ") {
    R = ring_rationals();
  } else if (n == "F2[x]/(x^2)") {
    R = ring_truncated(2, 2);
  } else if (n == "F3[x]/(x^3)") {
    R = ring_truncated(3, 3);
  } else if (n == "F2[x,y]/(x^2,xy,y^2)") {
    R = ring_local_algebra(2, {"x", "y"}, {"x^2", "x*y", "y^2"}, 2);
  } else if (n.size() > 1 && n[0] == 'F') {
    size_t i = 1;
    while (i < n.size() && std::isdigit(static_cast<unsigned char>(n[i]))) ++i;
    uint32_t p = uint32_t(std::stoul(n.substr(1, i - 1)));
    std::string rest = n.substr(i);
    if (rest.empty()) {
      R = ring_prime_field(p);
    } else if (rest.size() == 3 && rest[0] == '[' && rest[2] == ']') {
      R = ring_univ_poly(p, rest.substr(1, 1));
    } else if (rest.rfind("[x]/(x^", 0) == 0 && rest.back() == ')') {
      R = ring_truncated(p, std::stoul(rest.substr(7, rest.size() - 8)));
    }
  }
  if (!R) fail(Err::Validation, "unknown ring name '" + n + "'");
  cache[n] = R;
  return R;
}

json flags_json(const Flags& f) {
  return {{"is-field", f.field},
          {"is-euclidean-domain", f.euclidean},
          {"is-artinian-local", f.artinian_local},
          {"is-domain", f.domain},
          {"is-generically-gorenstein", f.gen_gorenstein},
          {"is-gorenstein-dim-zero", f.gorenstein0}};
}

}  // namespace stabcx
