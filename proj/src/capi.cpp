#define STABCX_BUILD 1

#include "stabcx/stabcx.h"

#include <cstring>

#include "apps.hpp"

using namespace stabcx;

struct stabcx_ring {
  RingP r;
};
struct stabcx_complex {
  Complex x;
};
struct stabcx_module {
  PresentedModule m;
};

namespace {

thread_local std::string last_error;

stabcx_status code_of(Err e) {
  switch (e) {
    case Err::Argument: return STABCX_E_ARGUMENT;
    case Err::Unsupported: return STABCX_E_UNSUPPORTED;
    case Err::Precondition: return STABCX_E_PRECONDITION;
    case Err::Validation: return STABCX_E_VALIDATION;
    case Err::Parse: return STABCX_E_PARSE;
  }
  return STABCX_E_INTERNAL;
}

template <class F>
stabcx_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return STABCX_OK;
  } catch (const StabError& e) {
    last_error = e.what();
    return code_of(e.code);
  } catch (const json::exception& e) {
    last_error = e.what();
    return STABCX_E_PARSE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return STABCX_E_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void put(char** out, const json& j) {
  if (out) *out = dup(j.dump(2));
}

json parse(const char* s) {
  if (!s) fail(Err::Argument, "null string");
  return json::parse(s);
}

template <class T>
void need(const T* p) {
  if (!p) fail(Err::Argument, "null handle");
}

std::pair<int, int> span(const Complex& X) {
  if (X.L.lo > X.L.hi) return {0, -1};
  return {X.L.lo - X.L.lp - 1, X.L.hi + X.L.rp + 1};
}

}  // namespace

extern "C" {

const char* stabcx_version(void) { return "0.1.0"; }
const char* stabcx_last_error(void) { return last_error.c_str(); }
void stabcx_string_free(char* s) { std::free(s); }

stabcx_status stabcx_ring_from_json(const char* s, stabcx_ring** out) {
  return guard([&] {
    need(out);
    json j = parse(s);
    *out = new stabcx_ring{ring_from_json(j)};
  });
}

void stabcx_ring_free(stabcx_ring* r) { delete r; }

stabcx_status stabcx_ring_describe(const stabcx_ring* r, char** out) {
  return guard([&] {
    need(r);
    put(out, {{"name", r->r->name()}, {"flags", flags_json(r->r->flags)}, {"descriptor", r->r->to_json()}});
  });
}

stabcx_status stabcx_complex_from_json(const stabcx_ring* r, const char* s, stabcx_complex** out) {
  return guard([&] {
    need(out);
    Complex X = complex_from_json(parse(s), r ? r->r : nullptr);
    if (!valid_complex(X)) fail(Err::Validation, "d o d != 0");
    *out = new stabcx_complex{X};
  });
}

void stabcx_complex_free(stabcx_complex* x) { delete x; }

stabcx_status stabcx_complex_to_json(const stabcx_complex* x, char** out) {
  return guard([&] {
    need(x);
    put(out, complex_json(x->x));
  });
}

stabcx_status stabcx_complex_dual(const stabcx_complex* x, stabcx_complex** out) {
  return guard([&] {
    need(x);
    need(out);
    *out = new stabcx_complex{dual(x->x)};
  });
}

stabcx_status stabcx_complex_cohomology(const stabcx_complex* x, char** out) {
  return guard([&] {
    need(x);
    const Complex& X = x->x;
    json degs = json::array();
    auto [a, b] = span(X);
    for (int k = a; k <= b; ++k) {
      PresentedModule H = cohomology(X, k);
      if (is_zero_module(H)) continue;
      degs.push_back({{"degree", k}, {"module", module_str(H)}, {"invariants", invariants(H)}});
    }
    put(out, {{"acyclic", degs.empty()}, {"nonzero", degs}, {"range", {a, b}}, {"periodic", !X.bounded()}});
  });
}

stabcx_status stabcx_complex_split(const stabcx_complex* x, char** out) {
  return guard([&] {
    need(x);
    SplitReport s = split_criteria(x->x);
    json j = {{"split", s.dsd},
              {"criteria", {{"dsd", s.dsd}, {"c_projective", s.c_projective}, {"b_summand", s.b_summand},
                            {"decomposed", s.decomposed}}},
              {"agree", s.agree()}};
    if (s.dsd)
      if (auto D = split_decompose(x->x)) {
        j["certificate"] = {{"zero_differential_part", complex_json(D->Xp)},
                            {"null_part", complex_json(D->N)},
                            {"to_sum", map_json(D->to_sum)},
                            {"from_sum", map_json(D->from_sum)}};
      }
    put(out, j);
  });
}

stabcx_status stabcx_stable(const stabcx_complex* x, const char* op, int n, int margin, char** out) {
  return guard([&] {
    need(x);
    std::string o = op ? op : "";
    const Complex& X = x->x;
    if (o == "approx") {
      RightApprox A = right_add_approx(X);
      put(out, {{"F", complex_json(A.F)},
                {"p", map_json(A.p)},
                {"omega_complex", complex_json(A.Omega)},
                {"certificate", {{"cohomologically_surjective", is_cohomologically_surjective(A.p)},
                                 {"q", map_json(A.q)},
                                 {"omega", map_json(A.omega)},
                                 {"h", homotopy_json(A.Omega, A.X, A.h)}}}});
      return;
    }
    if (n < 1) fail(Err::Argument, "-n must be at least 1");
    if (o == "omega") {
      Complex Y = syzygy(X, n);
      put(out, {{"n", n}, {"omega", complex_json(Y)}, {"in_add", is_add(Y)}});
    } else if (o == "sigma") {
      Complex Y = cosyzygy(X, n);
      put(out, {{"n", n}, {"sigma", complex_json(Y)}, {"in_add", is_add(Y)}});
    } else {
      fail(Err::Argument, "unknown stable operation '" + o + "'");
    }
    (void)margin;
  });
}

stabcx_status stabcx_certify(const stabcx_complex* x, const char* kind, int* holds, char** out) {
  return guard([&] {
    need(x);
    std::string k = kind ? kind : "";
    if (k != "torsion-free" && k != "reflexive") fail(Err::Argument, "unknown certificate '" + k + "'");
    StarCert c = star_certificate(x->x);
    if (holds) *holds = k == "reflexive" ? c.reflexive : c.torsion_free;
    put(out, {{"kind", k}, {"holds", k == "reflexive" ? c.reflexive : c.torsion_free}, {"certificate", c.to_json()}});
  });
}

stabcx_status stabcx_contract(const char* s, int margin, char** out) {
  return guard([&] {
    PartialResolution res = resolution_from_json(parse(s));
    validate_resolution(res, margin);
    Contraction C = contract(res, margin);
    BlockReport b = check_blocks(C, res);
    Classification cl = classify(res, C, margin);
    put(out, {{"n", C.n},
              {"contraction", complex_json(C.Ft)},
              {"blocks", b.to_json()},
              {"cone_sign", C.cone_sign},
              {"cohomology_sequence_exact", cohomology_sequence_exact(C)},
              {"classification", cl.to_json()},
              {"certificate", {{"psi", map_json(C.psi)}, {"phi", map_json(C.phi)}, {"omega", map_json(C.omega_t)}}}});
  });
}

stabcx_status stabcx_delta(const stabcx_complex* x, int n, int i, int margin, char** out) {
  return guard([&] {
    need(x);
    DeltaComplex D = delta(x->x, n, i, margin);
    json j = D.to_json();
    if (D.lseq.n > 0) j["classification"] = classify(D.lseq, margin).to_json();
    put(out, j);
  });
}

stabcx_status stabcx_duality(const stabcx_complex* x, int* ok, char** out) {
  return guard([&] {
    need(x);
    Verdict v = duality_check(x->x);
    if (ok) *ok = v.ok();
    put(out, v.to_json());
  });
}

stabcx_status stabcx_module_from_json(const char* s, stabcx_module** out) {
  return guard([&] {
    need(out);
    *out = new stabcx_module{module_from_json(parse(s))};
  });
}

void stabcx_module_free(stabcx_module* m) { delete m; }

stabcx_status stabcx_gdim(const stabcx_module* m, int horizon, char** out) {
  return guard([&] {
    need(m);
    GDim g = g_dimension(m->m, horizon);
    ReflexivityVerdict t = is_totally_reflexive(m->m, g.horizon);
    put(out, {{"gdim", g.to_json()}, {"totally_reflexive", t.to_json()}});
  });
}

stabcx_status stabcx_experiment_run(const char* s, int has_seed, uint64_t seed, int margin, int* failed,
                                    char** report, char** table) {
  return guard([&] {
    ExperimentConfig c = experiment_from_json(parse(s));
    if (has_seed) c.seed = seed;
    if (margin > 0) c.margin = margin;
    ExperimentReport r = run_experiment(c);
    if (failed) *failed = r.failed();
    put(report, r.to_json());
    if (table) *table = dup(r.table());
  });
}

stabcx_status stabcx_fixture_replay(const char* s, int* failed, char** out) {
  return guard([&] {
    json f = parse(s);
    TrialVerdict v = replay_fixture(f);
    bool bad = v.status == "fail" || v.status == "error";
    if (failed) *failed = bad;
    json j = {{"check", f.at("check")}, {"seed", v.seed}, {"status", v.status}, {"detail", v.detail}};
    if (f.contains("status")) j["recorded_status"] = f["status"];
    put(out, j);
  });
}

}  // extern "C"
