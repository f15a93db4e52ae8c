#include "apps.hpp"
#include "helpers.hpp"

using namespace stabcx;
using stabcx::test::M;

namespace {

// ... -> R -x-> R -x-> R -> ... over F2[x]/(x^2)
Complex x_complex() {
  auto R = ring_named("F2[x]/(x^2)");
  Mat x = M(*R, {{"x"}});
  return make_complex(R, Layout{0, 0, 1, 1}, [](int) { return size_t(1); }, [x](int) { return x; });
}

PresentedModule residue(const char* ring) {
  auto R = ring_named(ring);
  return coker_raw(R, M(*R, {{"x"}}));
}

}  // namespace

TEST_CASE("duality verdicts") {
  auto Z = ring_integers();
  Verdict z = duality_check(zero_complex(Z));
  CHECK(z.lhs);
  CHECK(z.rhs);
  CHECK(z.mode == Mode::Assertion);

  // bounded acyclic: [Z -1-> Z] and [Z -(2 1)^T-> Z^2 -(1 -2)-> Z]
  CHECK(duality_check(bounded_complex(Z, 0, {1, 1}, {M(*Z, {{"1"}})})).rhs);
  Complex E = bounded_complex(Z, -1, {1, 2, 1}, {M(*Z, {{"2"}, {"1"}}), M(*Z, {{"1", "-2"}})});
  Verdict e = duality_check(E);
  CHECK(e.lhs);
  CHECK(e.rhs);

  // the dual of the x-complex is again the x-complex
  Complex X = x_complex();
  Complex D = dual(X);
  for (int k = -3; k <= 3; ++k) CHECK(equal(*X.R, D.d(k), X.d(k)));
  Verdict p = duality_check(X);
  CHECK(p.lhs);
  CHECK(p.rhs);
  CHECK(p.ok());

  // H(X) != 0 on both sides for Z/2
  Verdict t = duality_check(bounded_complex(Z, -1, {1, 1}, {M(*Z, {{"2"}})}));
  CHECK_FALSE(t.lhs);
  CHECK_FALSE(t.rhs);

  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  Verdict o = duality_check(free_in_degree(P, 1, 0));
  CHECK(o.mode == Mode::Observation);
  CHECK(o.ok());
}

TEST_CASE("quasi-isomorphisms and their duals") {
  auto Z = ring_integers();
  Complex Y = bounded_complex(Z, -1, {1, 1}, {M(*Z, {{"2"}})});
  Verdict id = quasi_iso_duality(identity(Y));
  CHECK(id.lhs);
  CHECK(id.rhs);

  // [Z^2 -diag(2,1)-> Z^2] -> [Z -2-> Z], projection onto the first coordinate
  Complex X = bounded_complex(Z, -1, {2, 2}, {M(*Z, {{"2", "0"}, {"0", "1"}})});
  Mat pr = M(*Z, {{"1", "0"}});
  ChainMap f = make_map(X, Y, {}, [&](int k) { return k == -1 || k == 0 ? pr : zeros(*Z, Y.rank(k), X.rank(k)); });
  REQUIRE(is_chain_map(f));
  Verdict q = quasi_iso_duality(f);
  CHECK(q.lhs);
  CHECK(q.rhs);

  Verdict n = quasi_iso_duality(zero_map(Y, Y));
  CHECK_FALSE(n.lhs);
  CHECK_FALSE(n.rhs);

  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  Complex V = bounded_complex(P, -1, {2, 1}, {M(*P, {{"x", "y"}})});
  Verdict o = quasi_iso_duality(identity(V));
  CHECK(o.mode == Mode::Observation);
  CHECK(o.agree());
}

TEST_CASE("maps into Add(R) and finite resolutions") {
  auto A = ring_named("F2[x]/(x^2)");
  PerpReport z = perp_check(zero_complex(A));
  CHECK(z.maps == 0);
  CHECK(z.ok());

  Complex X = x_complex();
  PartialResolution res = build_resolution(bounded_complex(A, 0, {1, 1}, {M(*A, {{"x"}})}), 2);
  Complex Y = contract(res).Ft;
  PerpReport p = perp_check(X, {Y});
  CHECK(p.hypothesis);
  // f = x on one degree is a cocycle into R[-j]
  CHECK(p.maps > 0);
  CHECK(p.null == p.maps);

  // R in degree 0: H(X*) != 0 and the identity is not null-homotopic
  PerpReport r = perp_check(free_in_degree(A, 1, 0));
  CHECK_FALSE(r.hypothesis);
  CHECK(r.null < r.maps);

  auto Z = ring_integers();
  Complex E = bounded_complex(Z, -1, {1, 1}, {M(*Z, {{"1"}})});
  PerpReport e = perp_check(E, {bounded_complex(Z, -1, {1, 1}, {M(*Z, {{"3"}})})});
  CHECK(e.hypothesis);
  CHECK(e.ok());
}

TEST_CASE("syzygies of complexes with acyclic dual") {
  auto A = ring_named("F2[x]/(x^2)");
  OmegaStarReport z = omega_star_checks(zero_complex(A), 2);
  CHECK_FALSE(z.skipped);
  CHECK(z.ok());

  OmegaStarReport o = omega_star_checks(x_complex(), 3);
  CHECK_FALSE(o.skipped);
  REQUIRE(o.certs.size() == 4);
  for (const auto& c : o.certs) CHECK(c.reflexive);
  CHECK(o.ok());

  OmegaStarReport s = omega_star_checks(free_in_degree(A, 1, 0), 2);
  CHECK(s.skipped);
  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  OmegaStarReport n = omega_star_checks(zero_complex(P), 2);
  CHECK(n.skipped);
  CHECK(n.reason.find("Gorenstein") != std::string::npos);

  for (const char* name : {"ZZ", "F2[x]/(x^2)", "F2[x,y]/(x^2,xy,y^2)"}) {
    auto R = ring_named(name);
    SamplerConfig cfg;
    cfg.max_rank = 2;
    cfg.max_width = 3;
    Sampler S(R, 31, cfg);
    for (int t = 0; t < 8; ++t) {
      CAPTURE(name);
      ExtOneReport e = ext_one_check(S.bounded());
      CHECK(e.ok());
    }
  }
}

TEST_CASE("G-dimension and total reflexivity") {
  auto Z = ring_integers();
  // Ext^1(Z/2, Z) = coker(2) = Z/2 and Ext^2 = 0 from 0 -> Z -2-> Z
  PresentedModule z2 = coker_raw(Z, M(*Z, {{"2"}}));
  GDim g = g_dimension(z2);
  CHECK(g.horizon == 2);
  CHECK(g.value == 1);
  CHECK_FALSE(g.exceeds);
  CHECK(projective_dimension(z2, 3) == 1);
  ReflexivityVerdict t = is_totally_reflexive(z2);
  CHECK_FALSE(t.verdict);
  CHECK(t.first_ext == 1);
  CHECK(t.verdict == t.definition());

  PresentedModule R1 = free_module(Z, 1);
  CHECK(g_dimension(R1).value == 0);
  CHECK(is_totally_reflexive(R1).verdict);
  CHECK(projective_dimension(R1, 2) == 0);
  CHECK(g_dimension(coker_raw(Z, M(*Z, {{"1"}}))).zero_module);

  PresentedModule k = residue("F2[x]/(x^2)");
  GDim gk = g_dimension(k);
  CHECK(gk.horizon == 4);
  CHECK(gk.value == 0);
  ReflexivityVerdict tk = is_totally_reflexive(k);
  CHECK(tk.verdict);
  CHECK(tk.definition());
  CHECK(projective_dimension(k, 4) == -1);

  // over the socle-two algebra Ext^i(k, R) never vanishes
  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  PresentedModule kp = coker_raw(P, M(*P, {{"x", "y"}}));
  GDim gp = g_dimension(kp, 3);
  CHECK(gp.exceeds);
  ReflexivityVerdict tp = is_totally_reflexive(kp, 3);
  CHECK_FALSE(tp.gorenstein_rule);
  CHECK_FALSE(tp.verdict);
}

TEST_CASE("infinite syzygy witnesses") {
  auto Z = ring_integers();
  SyzygyWitness r = infinite_syzygy_witness(free_module(Z, 1), 3);
  CHECK(r.coresolution.rank(0) == 1);
  for (int k = 1; k <= 3; ++k) CHECK(r.coresolution.rank(k) == 0);
  CHECK(r.exact);
  CHECK(r.dual_exact);

  PresentedModule k = residue("F2[x]/(x^2)");
  SyzygyWitness w = infinite_syzygy_witness(k, 4);
  const Ring& A = *k.R;
  for (int i = 0; i < 4; ++i) {
    REQUIRE(w.coresolution.rank(i) == 1);
    CHECK(equal(A, w.coresolution.d(i), M(A, {{"x"}})));
  }
  CHECK(w.exact);
  CHECK(w.dual_exact);
  // the spliced complex is the x-complex on its interior
  for (int j = -4; j < 4; ++j) CHECK(equal(A, w.spliced.d(j), M(A, {{"x"}})));

  try {
    infinite_syzygy_witness(coker_raw(Z, M(*Z, {{"2"}})), 2);
    FAIL("expected a precondition error");
  } catch (const StabError& e) {
    CHECK(e.code == Err::Precondition);
    CHECK(std::string(e.what()).find("Ext^1") != std::string::npos);
  }
}

TEST_CASE("canonical module and Tachikawa") {
  auto A = ring_named("F2[x]/(x^2)");
  PresentedModule w = canonical_module(A);
  CHECK(w.n == 1);
  CHECK(is_projective(w));
  TachikawaReport t = tachikawa_check(A);
  CHECK(t.ext_vanish);
  CHECK(t.gorenstein);
  CHECK(t.consistent());

  // omega needs as many generators as the socle has dimensions
  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  PresentedModule wp = canonical_module(P);
  CHECK(wp.n == 2);
  TachikawaReport tp = tachikawa_check(P);
  CHECK_FALSE(tp.gorenstein);
  REQUIRE(!tp.ext_zero.empty());
  CHECK_FALSE(tp.ext_zero[0]);
  CHECK_FALSE(tp.asserted);

  TachikawaReport f = tachikawa_check(ring_prime_field(5));
  CHECK(f.gorenstein);
  CHECK(f.ext_vanish);
  CHECK_THROWS_AS(canonical_module(ring_integers()), StabError);

  std::mt19937_64 g(7);
  for (int i = 0; i < 12; ++i) {
    RingP R = random_local_algebra(g);
    CAPTURE(R->name());
    CHECK(static_cast<const QuotientAlgebra&>(*R).dim <= 6);
    TachikawaReport r = tachikawa_check(R, 12);
    CHECK(r.ok());
  }
}

TEST_CASE("experiments") {
  json cfg = {{"ring", "ZZ"}, {"trials", 1}, {"seed", 5}, {"checks", {"duality"}}, {"fixture", complex_json(zero_complex(ring_integers()))}};
  ExperimentReport r = run_experiment(experiment_from_json(cfg));
  REQUIRE(r.reports.size() == 1);
  CHECK(r.reports[0].count("pass") == 1);
  CHECK_FALSE(r.failed());

  json bad = cfg;
  bad["checks"] = {"no-such-check"};
  try {
    experiment_from_json(bad);
    FAIL("expected a config error");
  } catch (const StabError& e) {
    CHECK(e.code == Err::Argument);
  }
  bad = cfg;
  bad["trials"] = 0;
  CHECK_THROWS_AS(experiment_from_json(bad), StabError);

  json many = {{"ring", "F2[x]/(x^2)"},
               {"trials", 6},
               {"seed", 99},
               {"sampler", {{"max_rank", 2}, {"width", {1, 3}}, {"periodic", 0.3}}},
               {"checks", {"duality", "star-reflexive", "totally-reflexive"}}};
  ExperimentConfig c = experiment_from_json(many);
  std::string a = run_experiment(c).to_json().dump();
  c.threads = 3;
  std::string b = run_experiment(c).to_json().dump();
  CHECK(a == b);
  ExperimentReport rep = run_experiment(c);
  CHECK_FALSE(rep.failed());
  CHECK(rep.reports[1].count("pass") == 6);

  // each recorded input replays to the same verdict
  for (const auto& v : rep.reports[0].verdicts) {
    json fx = {{"check", "duality"}, {"ring", "F2[x]/(x^2)"}, {"seed", v.seed}, {"input", v.detail["input"]}};
    TrialVerdict again = replay_fixture(fx);
    CHECK(again.status == v.status);
    CHECK(again.detail == v.detail);
  }
}
