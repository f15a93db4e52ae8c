#include <random>

#include "helpers.hpp"
#include "module.hpp"

using namespace stabcx;
using stabcx::test::M;

namespace {

PresentedModule mod(const std::string& ring, const std::vector<std::vector<std::string>>& rel, size_t n) {
  auto R = ring_named(ring);
  if (rel.empty()) return free_module(R, n);
  return coker_raw(R, M(*R, rel));
}

json euclid_inv(std::vector<std::string> factors, size_t free) { return {{"factors", factors}, {"free", free}}; }

}  // namespace

TEST_CASE("cokernel presentations") {
  auto Z = ring_integers();
  CHECK(is_zero_module(cokernel_presentation(Z, M(*Z, {{"1"}}))));
  auto C2 = cokernel_presentation(Z, M(*Z, {{"2"}}));
  CHECK(invariants(C2) == euclid_inv({"2"}, 0));
  CHECK(invariants(cokernel_presentation(Z, M(*Z, {{"2", "0"}, {"0", "3"}}))) == euclid_inv({"6"}, 0));
  auto L = ring_named("F2[x,y]/(x^2,xy,y^2)");
  auto C = cokernel_presentation(L, M(*L, {{"x"}, {"y"}}));
  CHECK(invariants(C)["dims"][0] == 5);
}

TEST_CASE("free resolutions") {
  auto Z2 = mod("ZZ", {{"2"}}, 1);
  auto F = free_resolution(Z2, 2);
  REQUIRE(F.maps.size() == 2);
  CHECK(F.ranks == std::vector<size_t>{1, 1, 0});
  CHECK(resolution_exact(F));
  auto k = mod("F2[x]/(x^2)", {{"x"}}, 1);
  auto G = free_resolution(k, 3);
  CHECK(G.ranks == std::vector<size_t>{1, 1, 1, 1});
  for (auto& d : G.maps) CHECK(G.R->str(d(0, 0)) == "x");
  CHECK(resolution_exact(G));
  auto R1 = free_resolution(free_module(ring_named("ZZ"), 1), 2);
  CHECK(R1.ranks == std::vector<size_t>{1, 0, 0});
}

TEST_CASE("duals, transposes and biduality") {
  auto Z2 = mod("ZZ", {{"2"}}, 1);
  CHECK(is_zero_module(dual_module(Z2)));
  CHECK(invariants(transpose(Z2)) == euclid_inv({"2"}, 0));
  auto k = mod("F2[x]/(x^2)", {{"x"}}, 1);
  CHECK(invariants(dual_module(k)) == invariants(k));
  CHECK(invariants(transpose(k)) == invariants(k));
  auto F3 = free_module(ring_named("F3[x]/(x^3)"), 3);
  CHECK(invariants(dual_module(F3)) == invariants(F3));
  CHECK(is_reflexive(F3));
  CHECK(is_zero_module(transpose(F3)));
}

TEST_CASE("Ext and Tor oracles") {
  auto Z = ring_integers();
  auto one = free_module(Z, 1);
  auto Z2 = mod("ZZ", {{"2"}}, 1);
  CHECK(invariants(ext(Z2, one, 1)) == euclid_inv({"2"}, 0));
  CHECK(is_zero_module(ext(Z2, one, 2)));
  CHECK(is_zero_module(ext(Z2, one, 0)));
  CHECK(invariants(tor(Z2, Z2, 1)) == euclid_inv({"2"}, 0));
  CHECK(invariants(tor(Z2, Z2, 0)) == euclid_inv({"2"}, 0));
  CHECK(is_zero_module(ext(one, Z2, 1)));
  auto k = mod("F2[x]/(x^2)", {{"x"}}, 1);
  auto R1 = free_module(k.R, 1);
  for (size_t i = 1; i <= 4; ++i) CHECK(is_zero_module(ext(k, R1, i)));
  // Hom(k,k) = k and Ext^i(k,k) = k over the dual numbers
  for (size_t i = 0; i <= 3; ++i) CHECK(invariants(ext(k, k, i))["dims"][0] == 1);
  // Hom(Z/6, Z/4) = Z/2
  auto Z6 = mod("ZZ", {{"6"}}, 1);
  auto Z4 = mod("ZZ", {{"4"}}, 1);
  CHECK(invariants(hom_module(Z6, Z4)) == euclid_inv({"2"}, 0));
  CHECK(invariants(ext(Z6, Z4, 1)) == euclid_inv({"2"}, 0));
}

TEST_CASE("projective, torsion, torsionless, reflexive") {
  auto Z = ring_integers();
  auto one = free_module(Z, 1);
  CHECK(is_projective(one));
  CHECK(is_torsionless(one));
  CHECK(is_reflexive(one));
  auto Z2 = mod("ZZ", {{"2"}}, 1);
  CHECK_FALSE(is_projective(Z2));
  CHECK(invariants(torsion_submodule(Z2)) == invariants(Z2));
  CHECK_FALSE(is_torsionless(Z2));
  auto k = mod("F2[x]/(x^2)", {{"x"}}, 1);
  CHECK_FALSE(is_projective(k));
  CHECK(is_zero_module(torsion_submodule(k)));
  CHECK(is_reflexive(k));
  auto P = ring_poly(2, {"x", "y"}, MonoOrder::GrevLex);
  CHECK_THROWS_AS(torsion_submodule(free_module(P, 1)), StabError);
}

namespace {

PresentedModule random_module(RingP R, std::mt19937_64& rng, const std::vector<std::string>& pool) {
  size_t n = 1 + rng() % 3, m = rng() % 4;
  Mat A = zeros(*R, n, m);
  for (auto& x : A.a) x = R->parse(pool[rng() % pool.size()]);
  return coker_raw(R, A);
}

}  // namespace

TEST_CASE("sampled modules: torsionless iff torsion-free over Z, reflexive duals, Ext independence") {
  std::mt19937_64 rng(3);
  auto Z = ring_integers();
  auto T = ring_named("F5[t]");
  for (int trial = 0; trial < 25; ++trial) {
    auto Mz = random_module(Z, rng, {"0", "1", "2", "-3", "4", "6"});
    CHECK(is_torsionless(Mz) == is_zero_module(torsion_submodule(Mz)));
    CHECK(is_reflexive(dual_module(Mz)));
    CHECK(auslander_bridger(Mz).ok());
    // padding the presentation by a free summand does not change Ext
    PresentedModule pad{Z, Mz.n + 1, zeros(*Z, Mz.n + 1, Mz.rel.c + 1)};
    set_block(pad.rel, 0, 0, Mz.rel);
    pad.rel(Mz.n, Mz.rel.c) = Z->one();
    auto one = free_module(Z, 1);
    CHECK(same_invariants(ext(pad, one, 1), ext(Mz, one, 1)));
    auto Mt = random_module(T, rng, {"0", "1", "t", "t+1", "t^2"});
    CHECK(is_reflexive(dual_module(Mt)));
    CHECK(is_torsionless(Mt) == is_zero_module(torsion_submodule(Mt)));
  }
}

TEST_CASE("sampled modules over local algebras: Auslander-Bridger") {
  std::mt19937_64 rng(5);
  for (auto name : {"F2[x]/(x^2)", "F2[x,y]/(x^2,xy,y^2)", "F3[x]/(x^3)"}) {
    auto R = ring_named(name);
    for (int trial = 0; trial < 15; ++trial) {
      auto Mr = random_module(R, rng, {"0", "0", "1", "x", "x+1", name[3] == 'x' && name[4] == ',' ? "y" : "x"});
      auto rep = auslander_bridger(Mr);
      CHECK(rep.ok());
      auto F = free_resolution(Mr, 3);
      CHECK(resolution_exact(F));
      for (auto& d : F.maps)
        if (&d != &F.maps[0])
          for (auto& e : d.a) CHECK_FALSE(R->is_unit(e));
    }
  }
}
