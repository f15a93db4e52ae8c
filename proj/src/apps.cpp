#include "apps.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "fp.hpp"

namespace stabcx {

namespace {

std::pair<int, int> window(const Complex& X) {
  const Layout& L = X.L;
  if (L.lo > L.hi) return {0, -1};
  return {L.lo - L.lp - 1, L.hi + L.rp + 1};
}

// Ext^i(M, R) = 0 for i = 1..h; first nonvanishing index in *first.
bool ext_vanishes(const PresentedModule& M, int h, int* first = nullptr) {
  PresentedModule R1 = free_module(M.R, 1);
  FreeResolution F = free_resolution(M, size_t(h + 1));
  for (int i = 1; i <= h; ++i)
    if (!is_zero_module(ext_from(F, R1, size_t(i)))) {
      if (first) *first = i;
      return false;
    }
  if (first) *first = 0;
  return true;
}

size_t rank_at(const FreeResolution& F, int i) { return i < int(F.ranks.size()) ? F.ranks[size_t(i)] : 0; }
Mat map_at(const FreeResolution& F, int i) {
  if (i < int(F.maps.size())) return F.maps[size_t(i)];
  return zeros(*F.R, rank_at(F, i), rank_at(F, i + 1));
}

bool cohomology_zero(const Complex& X, int a, int b) {
  for (int k = a; k <= b; ++k)
    if (!is_zero_module(cohomology(X, k))) return false;
  return true;
}

}  // namespace

Mode mode_for(const Ring& R) { return R.flags.gen_gorenstein ? Mode::Assertion : Mode::Observation; }
const char* mode_name(Mode m) { return m == Mode::Assertion ? "assertion" : "observation"; }

json Verdict::to_json() const {
  return {{"mode", mode_name(mode)}, {"lhs", lhs}, {"rhs", rhs}, {"agree", agree()}};
}

Verdict duality_check(const Complex& X) {
  Verdict v;
  v.mode = mode_for(*X.R);
  v.lhs = is_acyclic(X);
  v.rhs = is_acyclic(dual(X));
  return v;
}

Verdict quasi_iso_duality(const ChainMap& f) {
  Verdict v;
  v.mode = mode_for(*f.X.R);
  v.lhs = is_acyclic(cone(f));
  v.rhs = is_acyclic(cone(dual_map(f)));
  return v;
}

Complex truncate(const Complex& X, int a, int b) {
  if (a > b) return zero_complex(X.R);
  std::vector<size_t> rk;
  std::vector<Mat> ds;
  for (int k = a; k <= b; ++k) rk.push_back(X.rank(k));
  for (int k = a; k < b; ++k) ds.push_back(X.d(k));
  return bounded_complex(X.R, a, rk, ds);
}

json PerpReport::to_json() const {
  return {{"hypothesis", hypothesis}, {"maps", maps}, {"null", null}, {"ok", ok()}, {"targets", targets}};
}

PerpReport perp_check(const Complex& X, const std::vector<Complex>& extra, int margin) {
  PerpReport r;
  r.targets = json::array();
  r.hypothesis = is_acyclic(dual(X));
  std::vector<std::pair<std::string, Complex>> targets;
  auto [lo, hi] = window(X);
  for (int j = lo; j <= hi; ++j) targets.push_back({"R[" + std::to_string(-j) + "]", free_in_degree(X.R, 1, j)});
  for (size_t t = 0; t < extra.size(); ++t) {
    if (!extra[t].bounded()) fail(Err::Argument, "perp targets must be bounded");
    targets.push_back({"Y" + std::to_string(t), extra[t]});
  }
  for (const auto& [name, Y] : targets) {
    json entry = {{"target", name}, {"generators", 0}, {"null", 0}};
    if (Y.L.lo <= Y.L.hi) {
      // chain maps into a bounded Y only see X on the degrees next to Y
      Complex T = truncate(X, Y.L.lo - 1, Y.L.hi + 1);
      auto gens = chain_map_generators(T, Y);
      json w = json::array();
      int nulls = 0;
      for (const auto& g : gens) {
        auto h = null_homotopy(g, margin);
        bool ok = h && check_homotopy(g, *h, margin);
        if (ok) {
          ++nulls;
          w.push_back(homotopy_json(T, Y, *h));
        }
      }
      r.maps += int(gens.size());
      r.null += nulls;
      entry["generators"] = gens.size();
      entry["null"] = nulls;
      entry["witnesses"] = w;
    }
    r.targets.push_back(entry);
  }
  return r;
}

bool OmegaStarReport::ok() const {
  if (skipped) return true;
  for (const auto& c : certs)
    if (!c.torsion_free || !c.reflexive) return false;
  return ext_vanish;
}

json OmegaStarReport::to_json() const {
  json j = {{"skipped", skipped}, {"ok", ok()}};
  if (skipped) {
    j["reason"] = reason;
    return j;
  }
  j["certificates"] = json::array();
  for (const auto& c : certs) j["certificates"].push_back(c.to_json());
  j["ext_vanish"] = ext_vanish;
  j["horizon"] = horizon;
  return j;
}

OmegaStarReport omega_star_checks(const Complex& X, int r) {
  OmegaStarReport o;
  if (!X.R->flags.gen_gorenstein) {
    o.skipped = true;
    o.reason = "ring is not generically Gorenstein";
    return o;
  }
  if (!is_acyclic(dual(X))) {
    o.skipped = true;
    o.reason = "H(X*) != 0";
    return o;
  }
  o.certs.push_back(star_certificate(X));
  for (const auto& A : syzygy_tower(X, r)) o.certs.push_back(star_certificate(A.Omega));
  o.horizon = default_horizon(*X.R);
  o.ext_vanish = true;
  auto [a, b] = window(X);
  for (int k = a; k <= b && o.ext_vanish; ++k) o.ext_vanish = ext_vanishes(cohomology(X, k), o.horizon);
  return o;
}

json ExtOneReport::to_json() const { return {{"hypotheses", hypotheses}, {"conclusion", conclusion}, {"ok", ok()}}; }

ExtOneReport ext_one_check(const Complex& Y) {
  ExtOneReport e;
  e.hypotheses = is_star_torsion_free(Y) && is_star_reflexive(syzygy(Y, 1));
  PresentedModule R1 = free_module(Y.R, 1);
  e.conclusion = true;
  auto [a, b] = window(Y);
  for (int k = a; k <= b && e.conclusion; ++k) e.conclusion = is_zero_module(ext(cohomology(Y, k), R1, 1));
  return e;
}

int default_horizon(const Ring& R) {
  if (auto A = dynamic_cast<const QuotientAlgebra*>(&R)) return int(2 * A->dim);
  if (auto P = dynamic_cast<const PolyRing*>(&R)) return int(P->vars.size()) + 1;
  return 2;
}

json ReflexivityVerdict::to_json() const {
  return {{"horizon", horizon},       {"rule", gorenstein_rule ? "ext-vanishing" : "definition"},
          {"verdict", verdict},       {"reflexive", reflexive},
          {"ext_m_vanish", ext_m},    {"ext_dual_vanish", ext_dual},
          {"definition", definition()}, {"first_nonvanishing_ext", first_ext}};
}

ReflexivityVerdict is_totally_reflexive(const PresentedModule& M, int horizon) {
  ReflexivityVerdict v;
  v.horizon = horizon > 0 ? horizon : default_horizon(*M.R);
  v.gorenstein_rule = M.R->flags.gen_gorenstein;
  v.ext_m = ext_vanishes(M, v.horizon, &v.first_ext);
  v.reflexive = is_reflexive(M);
  v.ext_dual = ext_vanishes(dual_module(M), v.horizon);
  v.verdict = v.gorenstein_rule ? v.ext_m : v.definition();
  return v;
}

std::string GDim::str() const {
  if (zero_module) return "-inf (zero module)";
  if (exceeds) return ">= " + std::to_string(value) + " (exceeds horizon " + std::to_string(horizon) + ")";
  return std::to_string(value) + " (Ext checked to " + std::to_string(horizon) + ")";
}

json GDim::to_json() const {
  json j = {{"horizon", horizon}, {"exceeds", exceeds}, {"zero_module", zero_module}, {"label", str()}};
  j["value"] = zero_module ? json(nullptr) : json(value);
  return j;
}

GDim g_dimension(const PresentedModule& M, int horizon) {
  GDim g;
  g.horizon = horizon > 0 ? horizon : default_horizon(*M.R);
  if (is_zero_module(M)) {
    g.zero_module = true;
    return g;
  }
  PresentedModule R1 = free_module(M.R, 1);
  FreeResolution F = free_resolution(M, size_t(g.horizon + 1));
  for (int i = 1; i <= g.horizon; ++i)
    if (!is_zero_module(ext_from(F, R1, size_t(i)))) g.value = i;
  g.exceeds = g.value == g.horizon;
  return g;
}

int projective_dimension(const PresentedModule& M, int bound) {
  FreeResolution F = free_resolution(M, size_t(bound + 1));
  for (int n = 0; n <= bound; ++n)
    if (is_projective(coker_raw(M.R, map_at(F, n)))) return n;
  return -1;
}

json SyzygyWitness::to_json() const {
  return {{"coresolution", complex_json(coresolution)},
          {"spliced", complex_json(spliced)},
          {"exact", exact},
          {"dual_exact", dual_exact}};
}

SyzygyWitness infinite_syzygy_witness(const PresentedModule& M0, int depth) {
  if (depth < 1) fail(Err::Argument, "depth must be positive");
  const Ring& R = *M0.R;
  PresentedModule M = prune(M0);
  FreeResolution G = free_resolution(M, size_t(depth + 1));
  PresentedModule R1 = free_module(M.R, 1);
  for (int i = 1; i <= depth; ++i)
    if (!is_zero_module(ext_from(G, R1, size_t(i))))
      fail(Err::Precondition, "Ext^" + std::to_string(i) + "(M, R) does not vanish");
  Mat K, back;
  PresentedModule D = prune(dual_module(M, &K), nullptr, &back);
  K = mul(R, K, back);  // columns: the functionals generating M*
  FreeResolution F = free_resolution(D, size_t(depth + 1));
  if (G.ranks[0] != M.n || F.ranks[0] != D.n) fail(Err::Validation, "resolution changed the generators");

  SyzygyWitness w;
  std::vector<size_t> rk;
  std::vector<Mat> ds;
  for (int i = 0; i <= depth; ++i) rk.push_back(rank_at(F, i));
  for (int i = 0; i < depth; ++i) ds.push_back(transpose(map_at(F, i)));
  w.coresolution = bounded_complex(M.R, 0, rk, ds);

  std::vector<size_t> srk;
  std::vector<Mat> sds;
  for (int k = depth; k >= 0; --k) srk.push_back(rank_at(G, k));
  for (int k = depth; k >= 1; --k) sds.push_back(map_at(G, k - 1));
  sds.push_back(transpose(K));  // G_0 -> M -> M** -> P_0
  srk.insert(srk.end(), rk.begin(), rk.end());
  sds.insert(sds.end(), ds.begin(), ds.end());
  w.spliced = bounded_complex(M.R, -depth - 1, srk, sds);
  w.exact = cohomology_zero(w.spliced, -depth, depth - 1);
  w.dual_exact = cohomology_zero(dual(w.spliced), -depth + 1, depth);
  return w;
}

PresentedModule canonical_module(RingP Rp) {
  const Ring& R = *Rp;
  if (R.flags.field) return free_module(Rp, 1);
  auto A = dynamic_cast<const QuotientAlgebra*>(&R);
  if (!A) fail(Err::Unsupported, "canonical module needs a finite-dimensional local algebra");
  size_t d = A->dim;
  // generators e_g^*; (c e_b) e_g^* has coordinates c * row g of mult(e_b)
  FpMat E(A->p, d, d * d);
  for (size_t b = 0; b < d; ++b) {
    auto L = A->mult_matrix(A->basis_elem(b));
    for (size_t g = 0; g < d; ++g)
      for (size_t j = 0; j < d; ++j) E.at(j, g * d + b) = L[g * d + j];
  }
  FpMat Kr = fp_kernel(E);
  return prune(coker_raw(Rp, contract_vec(*A, Kr, d)));
}

json TachikawaReport::to_json() const {
  json j = {{"horizon", horizon},   {"ext_vanish", ext_vanish}, {"gorenstein", gorenstein},
            {"asserted", asserted}, {"consistent", consistent()}};
  j["ext_zero"] = ext_zero;
  return j;
}

TachikawaReport tachikawa_check(RingP R, int horizon) {
  TachikawaReport t;
  t.horizon = horizon > 0 ? horizon : default_horizon(*R);
  PresentedModule w = canonical_module(R);
  auto A = dynamic_cast<const QuotientAlgebra*>(R.get());
  t.gorenstein = !A || A->socle_dim == 1;
  t.asserted = R->flags.gen_gorenstein;
  PresentedModule R1 = free_module(R, 1);
  // resolve in stages: non-Gorenstein algebras have fast-growing Betti numbers
  // and usually show a nonvanishing Ext early
  t.ext_vanish = true;
  size_t len = 0;
  FreeResolution F;
  for (int i = 1; i <= t.horizon; ++i) {
    if (size_t(i + 1) > len) {
      len = std::min(size_t(t.horizon + 1), std::max(len * 2, size_t(4)));
      F = free_resolution(w, len);
    }
    bool z = is_zero_module(ext_from(F, R1, size_t(i)));
    t.ext_zero.push_back(z);
    if (!z) {
      t.ext_vanish = false;
      break;
    }
  }
  return t;
}

RingP random_local_algebra(std::mt19937_64& g, size_t max_dim) {
  static const std::vector<std::string> names = {"x", "y", "z"};
  static const uint32_t primes[] = {2, 3, 5};
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  for (int attempt = 0; attempt < 200; ++attempt) {
    uint32_t p = primes[pick(0, 2)];
    int nv = pick(1, 3);
    std::vector<std::string> vars(names.begin(), names.begin() + nv);
    size_t trunc = size_t(pick(2, nv == 1 ? 6 : 4));
    auto mono = [&] {
      std::string s;
      int deg = pick(2, 3);
      for (int k = 0; k < deg; ++k) s += (k ? "*" : "") + vars[size_t(pick(0, nv - 1))];
      return s;
    };
    std::vector<std::string> rels;
    int nr = pick(0, nv + 1);
    for (int r = 0; r < nr; ++r) {
      std::string rel = mono();
      if (pick(0, 1)) rel += "+" + std::to_string(pick(1, int(p) - 1)) + "*" + mono();
      rels.push_back(rel);
    }
    RingP R = ring_local_algebra(p, vars, rels, trunc);
    if (static_cast<const QuotientAlgebra&>(*R).dim <= max_dim) return R;
  }
  fail(Err::Validation, "no local algebra of the requested dimension found");
}

// ---------------------------------------------------------------- experiments

const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> c = {"duality",        "quasi-iso-duality", "perp",
                                             "omega-star",     "ext-one",           "star-reflexive",
                                             "torsion-free-criterion", "split-criteria", "totally-reflexive",
                                             "g-dimension",    "syzygy-witness",    "tachikawa"};
  return c;
}

ExperimentConfig experiment_from_json(const json& j) {
  if (!j.is_object()) fail(Err::Argument, "experiment config must be an object");
  ExperimentConfig c;
  if (!j.contains("ring")) fail(Err::Argument, "experiment config needs a ring");
  c.ring = j.at("ring");
  c.sampler = sampler_from_json(j.value("sampler", json(nullptr)));
  c.fixture = j.value("fixture", json(nullptr));
  c.trials = j.value("trials", 1);
  c.seed = j.value("seed", uint64_t(0));
  c.threads = j.value("threads", 1);
  c.margin = j.value("margin", 2);
  if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
  if (c.trials < 1) fail(Err::Argument, "trials must be at least 1");
  if (c.threads < 1) fail(Err::Argument, "threads must be at least 1");
  if (c.checks.empty()) fail(Err::Argument, "no checks requested");
  const auto& known = registered_checks();
  for (const auto& n : c.checks)
    if (std::find(known.begin(), known.end(), n) == known.end()) fail(Err::Argument, "unknown check '" + n + "'");
  return c;
}

int TheoremReport::count(const std::string& status) const {
  int n = 0;
  for (const auto& v : verdicts) n += v.status == status;
  return n;
}

json TheoremReport::to_json() const {
  json j = {{"check", check}, {"trials", verdicts.size()}};
  json vs = json::array();
  for (const auto& v : verdicts) vs.push_back({{"seed", v.seed}, {"status", v.status}, {"detail", v.detail}});
  j["verdicts"] = vs;
  j["counterwitnesses"] = counterwitnesses;
  json s;
  for (const char* k : {"pass", "fail", "finding", "skip", "unsupported", "error"}) s[k] = count(k);
  j["summary"] = s;
  return j;
}

bool ExperimentReport::failed() const {
  for (const auto& r : reports)
    if (r.count("fail") || r.count("error")) return true;
  return false;
}

json ExperimentReport::to_json() const {
  json j = {{"config", config}};
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(r.to_json());
  j["failed"] = failed();
  return j;
}

std::string ExperimentReport::table() const {
  std::ostringstream o;
  o << std::left << std::setw(24) << "check";
  const char* cols[] = {"pass", "fail", "finding", "skip", "unsupported", "error"};
  for (const char* c : cols) o << std::right << std::setw(12) << c;
  o << "\n";
  for (const auto& r : reports) {
    o << std::left << std::setw(24) << r.check;
    for (const char* c : cols) o << std::right << std::setw(12) << r.count(c);
    o << "\n";
  }
  return o.str();
}

namespace {

std::string status_of(const Verdict& v) { return v.ok() ? (v.finding() ? "finding" : "pass") : "fail"; }

Complex input_complex(const json& in, RingP R, Sampler& S) {
  if (in.contains("complex")) return complex_from_json(in.at("complex"), R);
  return S.complex();
}

PresentedModule input_module(const json& in, RingP R, Sampler& S) {
  if (in.contains("module")) {
    PresentedModule M = module_from_json(in.at("module"));
    M.R = R;
    return M;
  }
  return S.module();
}

}  // namespace

TrialVerdict run_check(const std::string& check, RingP R, const json& input0, uint64_t seed,
                       const SamplerConfig& sc, int margin) {
  json input = input0.is_object() ? input0 : json::object();
  TrialVerdict v;
  v.seed = seed;
  Sampler S(R, seed, sc);
  // inputs given by a fixture are kept verbatim so a replay reproduces the detail
  auto record = [&](const char* key, const json& value) {
    if (!input.contains(key)) input[key] = value;
  };
  auto pass_fail = [](bool ok) { return std::string(ok ? "pass" : "fail"); };
  try {
    if (check == "duality") {
      Complex X = input_complex(input, R, S);
      record("complex", complex_json(X));
      Verdict d = duality_check(X);
      v.status = status_of(d);
      v.detail = d.to_json();
    } else if (check == "quasi-iso-duality") {
      ChainMap f;
      if (input.contains("map")) {
        Complex X = complex_from_json(input["map"].at("X"), R), Y = complex_from_json(input["map"].at("Y"), R);
        f = map_from_json(input["map"].at("f"), X, Y);
      } else {
        Complex X = S.complex();
        if (X.bounded()) {
          f = S.chain_map(X, S.bounded());
        } else {
          f = right_add_approx(X).p;
        }
      }
      record("map", {{"X", complex_json(f.X)}, {"Y", complex_json(f.Y)}, {"f", map_json(f)}});
      Verdict d = quasi_iso_duality(f);
      v.status = status_of(d);
      v.detail = d.to_json();
    } else if (check == "perp") {
      Complex X = input_complex(input, R, S);
      std::vector<Complex> extra;
      if (input.contains("target")) {
        extra.push_back(complex_from_json(input["target"], R));
      } else {
        // a bounded target with an Add(R)-resolution of length two
        extra.push_back(contract(build_resolution(S.bounded(), 2), margin).Ft);
      }
      record("complex", complex_json(X));
      record("target", complex_json(extra[0]));
      PerpReport p = perp_check(X, extra, margin);
      p.targets = json(p.targets.size());  // witnesses stay out of the report
      v.status = p.hypothesis ? pass_fail(p.ok()) : "skip";
      v.detail = p.to_json();
    } else if (check == "omega-star") {
      Complex X = input_complex(input, R, S);
      record("complex", complex_json(X));
      OmegaStarReport o = omega_star_checks(X, input.value("r", 2));
      v.status = o.skipped ? "skip" : pass_fail(o.ok());
      v.detail = o.to_json();
    } else if (check == "ext-one") {
      Complex X = input_complex(input, R, S);
      record("complex", complex_json(X));
      ExtOneReport e = ext_one_check(X);
      v.status = e.hypotheses ? pass_fail(e.ok()) : "skip";
      v.detail = e.to_json();
    } else if (check == "star-reflexive") {
      Complex X = input_complex(input, R, S);
      record("complex", complex_json(X));
      StarCert c = star_certificate(X);
      v.status = c.reflexive ? "pass" : (R->flags.gorenstein0 ? "fail" : "finding");
      v.detail = c.to_json();
    } else if (check == "torsion-free-criterion") {
      Complex X = input_complex(input, R, S);
      record("complex", complex_json(X));
      StarCert c = star_certificate(X);
      v.status = pass_fail(c.agree());
      v.detail = c.to_json();
    } else if (check == "split-criteria") {
      Complex X = input.contains("complex") ? complex_from_json(input["complex"], R) : S.bounded();
      record("complex", complex_json(X));
      SplitReport s = split_criteria(X);
      bool homology = true;
      if (s.dsd) {
        auto D = split_decompose(X);
        homology = D.has_value();
        auto [a, b] = window(X);
        for (int k = a; k <= b && homology; ++k)
          homology = same_invariants(cohomology(X, k), free_module(R, D->Xp.rank(k)));
      }
      v.status = pass_fail(s.agree() && homology);
      v.detail = {{"split", s.dsd}, {"agree", s.agree()}, {"homology_matches", homology}};
    } else if (check == "totally-reflexive") {
      PresentedModule M = input_module(input, R, S);
      record("module", module_json(M));
      ReflexivityVerdict t = is_totally_reflexive(M, input.value("horizon", 0));
      v.status = pass_fail(t.verdict == t.definition());
      v.detail = t.to_json();
    } else if (check == "g-dimension") {
      PresentedModule M = input_module(input, R, S);
      record("module", module_json(M));
      GDim g = g_dimension(M, input.value("horizon", 0));
      int pd = projective_dimension(M, g.horizon);
      bool ok = g.zero_module || pd < 0 || g.value <= pd;
      if (ok && R->flags.euclidean && !R->flags.field && pd >= 0 && !g.zero_module &&
          same_invariants(torsion_submodule(M), M))
        ok = g.value == pd;
      v.status = pass_fail(ok);
      v.detail = {{"gdim", g.to_json()}, {"projective_dimension", pd}};
    } else if (check == "syzygy-witness") {
      PresentedModule M = input_module(input, R, S);
      record("module", module_json(M));
      int depth = input.value("depth", 3);
      try {
        SyzygyWitness w = infinite_syzygy_witness(M, depth);
        bool ok = w.exact && w.dual_exact;
        v.status = ok ? "pass" : (R->flags.gen_gorenstein ? "fail" : "finding");
        v.detail = {{"exact", w.exact}, {"dual_exact", w.dual_exact}};
      } catch (const StabError& e) {
        if (e.code != Err::Precondition) throw;
        v.status = "skip";
        v.detail = {{"reason", e.what()}};
      }
    } else if (check == "tachikawa") {
      RingP A;
      if (input.contains("ring")) {
        A = ring_from_json(input["ring"]);
      } else {
        A = random_local_algebra(S.rng());
        record("ring", A->to_json());
      }
      TachikawaReport t = tachikawa_check(A, input.value("horizon", 12));
      v.status = t.ok() ? (t.consistent() ? "pass" : "finding") : "fail";
      v.detail = t.to_json();
      v.detail["algebra"] = A->name();
    } else {
      fail(Err::Argument, "unknown check '" + check + "'");
    }
  } catch (const StabError& e) {
    if (e.code == Err::Argument) throw;
    v.status = e.code == Err::Unsupported ? "unsupported" : "error";
    v.detail = {{"message", e.what()}};
  }
  v.detail["input"] = input;
  return v;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  RingP R = ring_from_json(cfg.ring);
  ExperimentReport out;
  out.config = {{"ring", cfg.ring},   {"sampler", sampler_json(cfg.sampler)}, {"trials", cfg.trials},
                {"seed", cfg.seed},   {"margin", cfg.margin},                 {"checks", cfg.checks}};
  if (!cfg.fixture.is_null()) out.config["fixture"] = cfg.fixture;
  json base = cfg.fixture.is_null() ? json::object() : json{{"complex", cfg.fixture}};
  for (size_t c = 0; c < cfg.checks.size(); ++c) {
    const std::string& check = cfg.checks[c];
    TheoremReport rep;
    rep.check = check;
    rep.verdicts.resize(size_t(cfg.trials));
    // trial seeds depend on the run seed, the check index and the trial index only
    uint64_t cseed = trial_seed(cfg.seed, c);
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex mu;
    auto work = [&] {
      for (int t; (t = next++) < cfg.trials;) {
        try {
          rep.verdicts[size_t(t)] = run_check(check, R, base, trial_seed(cseed, uint64_t(t)), cfg.sampler, cfg.margin);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < cfg.threads; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    for (const auto& v : rep.verdicts)
      if (v.status == "fail" || v.status == "finding" || v.status == "error")
        rep.counterwitnesses.push_back({{"check", check},
                                        {"ring", R->to_json()},
                                        {"seed", v.seed},
                                        {"sampler", sampler_json(cfg.sampler)},
                                        {"margin", cfg.margin},
                                        {"input", v.detail.at("input")},
                                        {"status", v.status}});
    out.reports.push_back(std::move(rep));
  }
  return out;
}

TrialVerdict replay_fixture(const json& f) {
  RingP R = ring_from_json(f.at("ring"));
  return run_check(f.at("check").get<std::string>(), R, f.value("input", json::object()), f.value("seed", uint64_t(0)),
                   sampler_from_json(f.value("sampler", json(nullptr))), f.value("margin", 2));
}

}  // namespace stabcx
