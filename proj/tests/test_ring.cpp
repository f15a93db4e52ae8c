#include <random>

#include "fp.hpp"
#include "groebner.hpp"
#include "helpers.hpp"

using namespace stabcx;
using stabcx::test::M;

TEST_CASE("solve over the integers") {
  auto Z = ring_integers();
  auto x = solve(*Z, M(*Z, {{"2"}}), M(*Z, {{"4"}}));
  REQUIRE(x);
  CHECK(Z->str((*x)(0, 0)) == "2");
  CHECK(kernel(*Z, M(*Z, {{"2"}})).c == 0);
  CHECK_FALSE(solve(*Z, M(*Z, {{"2"}}), M(*Z, {{"1"}})));
}

TEST_CASE("kernel of the zero 1x1 matrix is everything") {
  for (auto name : {"ZZ", "QQ", "F2[x]/(x^2)", "F5[t]"}) {
    auto R = ring_named(name);
    Mat K = kernel(*R, zeros(*R, 1, 1));
    REQUIRE(K.c == 1);
    CHECK(R->is_unit(K(0, 0)));
  }
}

TEST_CASE("kernel over F2[x]/(x^2) is the ideal (x)") {
  auto R = ring_named("F2[x]/(x^2)");
  Mat K = kernel(*R, M(*R, {{"x"}}));
  REQUIRE(K.c == 1);
  CHECK(R->str(K(0, 0)) == "x");
  // exhaustive oracle: the annihilator of x among the four elements
  int count = 0;
  for (auto s : {"0", "1", "x", "1+x"})
    if (R->is_zero(R->mul(R->parse("x"), R->parse(s)))) ++count;
  CHECK(count == 2);
}

TEST_CASE("kernel of [x y] over F2[x,y]/(x^2,xy,y^2)") {
  auto R = ring_named("F2[x,y]/(x^2,xy,y^2)");
  Mat A = M(*R, {{"x", "y"}});
  Mat K = kernel(*R, A);
  CHECK(K.c == 4);
  CHECK(is_zero(*R, mul(*R, A, K)));
  // the kernel is m^2-free: it is m + m, of F2-dimension 4
  auto& Q = static_cast<const QuotientAlgebra&>(*R);
  CHECK(local_span_dim(Q, K) == 4);
}

TEST_CASE("cokernel dimension by rank count") {
  auto R = ring_named("F2[x,y]/(x^2,xy,y^2)");
  auto& Q = static_cast<const QuotientAlgebra&>(*R);
  Mat A = M(*R, {{"x"}, {"y"}});
  CHECK(2 * Q.dim - local_span_dim(Q, A) == 5);
}

TEST_CASE("Groebner basis of x^2-1, x^3-x over F5") {
  auto P = ring_poly(5, {"x"}, MonoOrder::Lex);
  auto& R = static_cast<const PolyRing&>(*P);
  auto G = groebner_ideal(R, {std::get<MPoly>(R.parse("x^2-1")), std::get<MPoly>(R.parse("x^3-x"))});
  REQUIRE(G.size() == 1);
  CHECK(R.str(G[0]) == R.str(R.parse("x^2+4")));
  CHECK(is_groebner(R, G));
  auto G2 = groebner_ideal(R, {std::get<MPoly>(R.parse("x^2")), std::get<MPoly>(R.parse("x"))});
  REQUIRE(G2.size() == 1);
  CHECK(R.str(G2[0]) == "x");
}

TEST_CASE("Groebner bases satisfy the Buchberger criterion") {
  auto P = ring_poly(3, {"x", "y", "z"}, MonoOrder::GrevLex);
  auto& R = static_cast<const PolyRing&>(*P);
  std::vector<MPoly> gens;
  for (auto s : {"x^2-y*z", "x*y-z^2", "y^2-x*z+1"}) gens.push_back(std::get<MPoly>(R.parse(s)));
  auto G = groebner_ideal(R, gens);
  CHECK(is_groebner(R, G));
  for (auto& g : gens) CHECK(normal_form(R, g, G).t.empty());
}

namespace {

Mat random_mat(const Ring& R, std::mt19937_64& rng, size_t r, size_t c, const std::vector<std::string>& pool) {
  Mat A = zeros(R, r, c);
  for (auto& x : A.a) x = R.parse(pool[rng() % pool.size()]);
  return A;
}

std::vector<std::string> pool_for(const std::string& name) {
  if (name == "ZZ") return {"0", "1", "-1", "2", "3", "-4", "6"};
  if (name == "QQ") return {"0", "1", "-1/2", "3", "2/3"};
  if (name == "F5[t]") return {"0", "1", "t", "t+2", "t^2-1", "3"};
  if (name == "F2[x]/(x^2)") return {"0", "1", "x", "1+x"};
  if (name == "F3[x]/(x^3)") return {"0", "1", "x", "x^2", "2+x"};
  if (name == "F2[x,y]/(x^2,xy,y^2)") return {"0", "1", "x", "y", "x+y", "1+y"};
  return {"0", "1", "2", "3"};
}

}  // namespace

TEST_CASE("solve and kernel properties on random systems") {
  std::mt19937_64 rng(7);
  for (auto name : {"ZZ", "QQ", "F5[t]", "F2[x]/(x^2)", "F3[x]/(x^3)", "F2[x,y]/(x^2,xy,y^2)", "F7"}) {
    auto R = ring_named(name);
    auto pool = pool_for(name);
    for (int trial = 0; trial < 30; ++trial) {
      size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
      Mat A = random_mat(*R, rng, r, c, pool);
      Mat x0 = random_mat(*R, rng, c, 1, pool);
      Mat b = mul(*R, A, x0);
      auto x = solve(*R, A, b);
      REQUIRE(x);
      CHECK(equal(*R, mul(*R, A, *x), b));
      Mat K = kernel(*R, A);
      CHECK(is_zero(*R, mul(*R, A, K)));
      CHECK(in_image(*R, K, sub(*R, *x, x0)));
      if (R->flags.euclidean) {
        SmithForm S = smith(*R, A);
        CHECK(K.c + S.diag.size() == c);
        CHECK(equal(*R, mul(*R, mul(*R, S.U, A), S.V), S.D));
        CHECK(equal(*R, mul(*R, S.U, S.Uinv), eye(*R, r)));
        for (size_t i = 1; i < S.diag.size(); ++i) CHECK(R->div(S.diag[i], S.diag[i - 1]));
      }
    }
  }
}

TEST_CASE("ring axioms on sampled triples") {
  std::mt19937_64 rng(11);
  for (auto name : {"ZZ", "QQ", "F5[t]", "F3[x]/(x^3)", "F2[x,y]/(x^2,xy,y^2)"}) {
    auto R = ring_named(name);
    auto pool = pool_for(name);
    for (int t = 0; t < 50; ++t) {
      auto a = R->parse(pool[rng() % pool.size()]);
      auto b = R->parse(pool[rng() % pool.size()]);
      auto c = R->parse(pool[rng() % pool.size()]);
      CHECK(R->eq(R->mul(a, R->mul(b, c)), R->mul(R->mul(a, b), c)));
      CHECK(R->eq(R->mul(a, b), R->mul(b, a)));
      CHECK(R->eq(R->mul(a, R->add(b, c)), R->add(R->mul(a, b), R->mul(a, c))));
    }
  }
}

TEST_CASE("ring validation") {
  CHECK_THROWS_AS(ring_prime_field(4), StabError);
  auto R = ring_named("F2[x,y]/(x^2,xy,y^2)");
  CHECK(R->flags.artinian_local);
  CHECK_FALSE(R->flags.gorenstein0);
  CHECK(ring_named("F2[x]/(x^2)")->flags.gorenstein0);
  json bad = {{"kind", "quotient-algebra"},
              {"field", 2},
              {"basis", {"1", "x"}},
              {"table", {{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}}},
              {"unit", 0},
              {"maximal_ideal", {1}}};
  CHECK_THROWS_AS(ring_from_json(bad), StabError);
}
