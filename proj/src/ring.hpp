#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace stabcx {

using json = nlohmann::json;

enum class Err { Argument = 1, Unsupported, Precondition, Validation, Parse };

struct StabError : std::runtime_error {
  Err code;
  StabError(Err c, const std::string& m) : std::runtime_error(m), code(c) {}
};

[[noreturn]] void fail(Err code, const std::string& msg);

// Coefficients are always reduced mod p and trimmed (no trailing zeros).
struct UPoly {
  std::vector<uint32_t> c;
  bool operator==(const UPoly&) const = default;
};
struct RatFn {
  UPoly num, den;  // gcd 1, den monic
  bool operator==(const RatFn&) const = default;
};
struct AVec {
  std::vector<uint32_t> c;
  bool operator==(const AVec&) const = default;
};
struct Term {
  std::vector<uint32_t> e;
  uint32_t c;
  bool operator==(const Term&) const = default;
};
struct MPoly {
  std::vector<Term> t;  // strictly decreasing in the ring's monomial order
  bool operator==(const MPoly&) const = default;
};

using Elem = std::variant<uint32_t, mpz_class, mpq_class, UPoly, RatFn, AVec, MPoly>;

enum class Kind { PrimeField, Rationals, Integers, UnivPoly, RatFunc, Quotient, PolyRing };
enum class Backend { Field, Euclid, Local, Poly };

struct Flags {
  bool field = false;
  bool euclidean = false;
  bool artinian_local = false;
  bool domain = false;
  bool gen_gorenstein = false;
  bool gorenstein0 = false;
};

class Ring;
using RingP = std::shared_ptr<const Ring>;

class Ring : public std::enable_shared_from_this<Ring> {
 public:
  Kind kind;
  Backend backend;
  Flags flags;
  uint32_t p = 0;  // characteristic of the base prime field, 0 for Z and Q

  virtual ~Ring() = default;

  virtual Elem zero() const = 0;
  virtual Elem one() const = 0;
  virtual Elem from_int(const mpz_class& n) const = 0;
  virtual Elem add(const Elem& a, const Elem& b) const = 0;
  virtual Elem neg(const Elem& a) const = 0;
  virtual Elem mul(const Elem& a, const Elem& b) const = 0;
  virtual bool is_zero(const Elem& a) const = 0;
  virtual bool is_unit(const Elem& a) const = 0;
  virtual Elem inv(const Elem& a) const = 0;
  // Some x with b*x = a, if one exists.
  virtual std::optional<Elem> div(const Elem& a, const Elem& b) const = 0;
  virtual std::string str(const Elem& a) const = 0;
  virtual std::optional<Elem> atom(const std::string&) const { return std::nullopt; }
  virtual json to_json() const = 0;
  virtual std::string name() const = 0;

  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  bool eq(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }
  Elem parse(const std::string& s) const;

  // Euclidean kinds.
  virtual bool norm_less(const Elem&, const Elem&) const;
  virtual void divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) const;
  // Unit u such that u*a is the canonical associate.
  virtual Elem unit_normal(const Elem& a) const;

  // Total quotient ring S^-1 R, or nullptr when unsupported.
  virtual RingP fraction_ring() const { return nullptr; }
  virtual Elem to_fraction(const Elem& a) const { return a; }

  RingP ptr() const { return shared_from_this(); }
};

uint32_t pow_mod(uint64_t a, uint64_t e, uint32_t p);
uint32_t inv_mod(uint32_t a, uint32_t p);
bool is_prime(uint64_t n);

// Univariate polynomial helpers over F_p.
namespace up {
void trim(UPoly& a);
int deg(const UPoly& a);
UPoly add(const UPoly& a, const UPoly& b, uint32_t p);
UPoly sub(const UPoly& a, const UPoly& b, uint32_t p);
UPoly mul(const UPoly& a, const UPoly& b, uint32_t p);
UPoly scale(const UPoly& a, uint32_t s, uint32_t p);
void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r, uint32_t p);
UPoly gcd(UPoly a, UPoly b, uint32_t p);  // monic
UPoly monic(const UPoly& a, uint32_t p);
std::string str(const UPoly& a, const std::string& var);
}  // namespace up

class PrimeField final : public Ring {
 public:
  explicit PrimeField(uint32_t p);
  Elem zero() const override { return uint32_t(0); }
  Elem one() const override { return uint32_t(1 % p); }
  Elem from_int(const mpz_class& n) const override;
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return std::get<uint32_t>(a) == 0; }
  bool is_unit(const Elem& a) const override { return !is_zero(a); }
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override;
  json to_json() const override;
  std::string name() const override;
  RingP fraction_ring() const override { return ptr(); }
};

class Rationals final : public Ring {
 public:
  Rationals();
  Elem zero() const override { return mpq_class(0); }
  Elem one() const override { return mpq_class(1); }
  Elem from_int(const mpz_class& n) const override { return mpq_class(n); }
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return sgn(std::get<mpq_class>(a)) == 0; }
  bool is_unit(const Elem& a) const override { return !is_zero(a); }
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override;
  json to_json() const override { return {{"kind", "rationals"}}; }
  std::string name() const override { return "QQ"; }
  RingP fraction_ring() const override { return ptr(); }
};

class Integers final : public Ring {
 public:
  Integers();
  Elem zero() const override { return mpz_class(0); }
  Elem one() const override { return mpz_class(1); }
  Elem from_int(const mpz_class& n) const override { return n; }
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return sgn(std::get<mpz_class>(a)) == 0; }
  bool is_unit(const Elem& a) const override;
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override { return std::get<mpz_class>(a).get_str(); }
  json to_json() const override { return {{"kind", "integers"}}; }
  std::string name() const override { return "ZZ"; }
  bool norm_less(const Elem& a, const Elem& b) const override;
  void divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) const override;
  Elem unit_normal(const Elem& a) const override;
  RingP fraction_ring() const override;
  Elem to_fraction(const Elem& a) const override { return mpq_class(std::get<mpz_class>(a)); }
};

class UnivPolyRing final : public Ring {
 public:
  std::string var;
  UnivPolyRing(uint32_t p, std::string var);
  Elem zero() const override { return UPoly{}; }
  Elem one() const override { return UPoly{{1}}; }
  Elem from_int(const mpz_class& n) const override;
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return std::get<UPoly>(a).c.empty(); }
  bool is_unit(const Elem& a) const override { return std::get<UPoly>(a).c.size() == 1; }
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override { return up::str(std::get<UPoly>(a), var); }
  std::optional<Elem> atom(const std::string& s) const override;
  json to_json() const override;
  std::string name() const override;
  bool norm_less(const Elem& a, const Elem& b) const override;
  void divmod(const Elem& a, const Elem& b, Elem& q, Elem& r) const override;
  Elem unit_normal(const Elem& a) const override;
  RingP fraction_ring() const override;
  Elem to_fraction(const Elem& a) const override;
};

// F_p(t); only reached by localizing F_p[t].
class RatFuncField final : public Ring {
 public:
  std::string var;
  RatFuncField(uint32_t p, std::string var);
  Elem zero() const override { return RatFn{{}, {{1}}}; }
  Elem one() const override { return RatFn{{{1}}, {{1}}}; }
  Elem from_int(const mpz_class& n) const override;
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return std::get<RatFn>(a).num.c.empty(); }
  bool is_unit(const Elem& a) const override { return !is_zero(a); }
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override;
  std::optional<Elem> atom(const std::string& s) const override;
  json to_json() const override;
  std::string name() const override;
  RingP fraction_ring() const override { return ptr(); }
  RatFn make(UPoly n, UPoly d) const;
};

// Finite-dimensional commutative local F_p-algebra given by structure constants.
class QuotientAlgebra final : public Ring {
 public:
  size_t dim;
  std::vector<std::string> basis;
  std::vector<uint32_t> table;  // table[(i*dim+j)*dim+k] = coeff of e_k in e_i e_j
  std::vector<uint32_t> unit;
  std::vector<size_t> mbasis;  // indices spanning the maximal ideal
  size_t socle_dim = 0;

  QuotientAlgebra(uint32_t p, std::vector<std::string> basis, std::vector<uint32_t> table,
                  std::vector<uint32_t> unit, std::vector<size_t> mbasis);
  Elem zero() const override { return AVec{std::vector<uint32_t>(dim, 0)}; }
  Elem one() const override { return AVec{unit}; }
  Elem from_int(const mpz_class& n) const override;
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override;
  bool is_unit(const Elem& a) const override;
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override;
  std::optional<Elem> atom(const std::string& s) const override;
  json to_json() const override;
  std::string name() const override;
  RingP fraction_ring() const override { return ptr(); }

  Elem basis_elem(size_t i) const;
  // dim x dim matrix (row-major) of multiplication by a; column j = a*e_j.
  std::vector<uint32_t> mult_matrix(const Elem& a) const;
  std::string label;
};

enum class MonoOrder { Lex, GrLex, GrevLex };

class PolyRing final : public Ring {
 public:
  std::vector<std::string> vars;
  MonoOrder order;
  PolyRing(uint32_t p, std::vector<std::string> vars, MonoOrder order);
  Elem zero() const override { return MPoly{}; }
  Elem one() const override;
  Elem from_int(const mpz_class& n) const override;
  Elem add(const Elem& a, const Elem& b) const override;
  Elem neg(const Elem& a) const override;
  Elem mul(const Elem& a, const Elem& b) const override;
  bool is_zero(const Elem& a) const override { return std::get<MPoly>(a).t.empty(); }
  bool is_unit(const Elem& a) const override;
  Elem inv(const Elem& a) const override;
  std::optional<Elem> div(const Elem& a, const Elem& b) const override;
  std::string str(const Elem& a) const override;
  std::optional<Elem> atom(const std::string& s) const override;
  json to_json() const override;
  std::string name() const override;

  int cmp(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) const;
  MPoly monomial(const std::vector<uint32_t>& e, uint32_t c) const;
  MPoly scale_mono(const MPoly& a, const std::vector<uint32_t>& e, uint32_t c) const;
};

// Ring construction and validation.
RingP ring_from_json(const json& j);
RingP ring_integers();
RingP ring_rationals();
RingP ring_prime_field(uint32_t p);
RingP ring_univ_poly(uint32_t p, const std::string& var = "t");
RingP ring_poly(uint32_t p, const std::vector<std::string>& vars, MonoOrder order);
// F_p[x]/(x^n)
RingP ring_truncated(uint32_t p, size_t n, const std::string& var = "x");
// F_p[vars]/(rels + all monomials of degree >= trunc); rels must lie in the maximal ideal.
RingP ring_local_algebra(uint32_t p, const std::vector<std::string>& vars,
                         const std::vector<std::string>& rels, size_t trunc);
// Named rings used throughout tests and fixtures: "ZZ", "QQ", "F5[t]", "F2[x]/(x^2)", ...
RingP ring_named(const std::string& name);

json flags_json(const Flags& f);

}  // namespace stabcx
