// Acceptance run: one PASS/FAIL line per criterion. Tolerances and sample
// counts are fixed here; every criterion returns a JSON report so the
// determinism criterion can compare reruns byte for byte.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <iostream>

#include "apps.hpp"

using namespace stabcx;

namespace {

constexpr uint64_t kSeed = 0x5eed2024;
constexpr double kAbSecondsPerModule = 1.0;
constexpr double kSplitSeconds = 30.0;
constexpr int kMaxDisagreements = 0;

struct Outcome {
  bool pass = true;
  json report;
  std::string note;
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Mat mat(const Ring& R, const std::vector<std::vector<std::string>>& rows) {
  Mat A = zeros(R, rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < A.r; ++i)
    for (size_t j = 0; j < A.c; ++j) A(i, j) = R.parse(rows[i][j]);
  return A;
}

// Default sampler sizes; the Delta and contraction criteria use small() to keep cones manageable.
SamplerConfig full(double periodic = 0.0) {
  SamplerConfig c;
  c.periodic = periodic;
  return c;
}

SamplerConfig small(double periodic = 0.0) {
  SamplerConfig c;
  c.max_rank = 2;
  c.max_width = 3;
  c.periodic = periodic;
  return c;
}

uint64_t seed_for(int criterion, uint64_t t) { return trial_seed(trial_seed(kSeed, uint64_t(criterion)), t); }

// 1. Auslander-Bridger sequence on fixed modules.
Outcome c1() {
  Outcome o;
  auto Z = ring_integers();
  auto P = ring_named("F2[x,y]/(x^2,xy,y^2)");
  std::vector<std::pair<std::string, PresentedModule>> mods = {
      {"Z/2", coker_raw(Z, mat(*Z, {{"2"}}))},
      {"Z/6", coker_raw(Z, mat(*Z, {{"6"}}))},
      {"Z+Z/4", coker_raw(Z, mat(*Z, {{"0"}, {"4"}}))},
      {"k", coker_raw(P, mat(*P, {{"x", "y"}}))},
      {"R/(x)", coker_raw(P, mat(*P, {{"x"}}))},
      {"m", coker_raw(P, mat(*P, {{"x", "y", "0", "0"}, {"0", "0", "x", "y"}}))}};
  double worst = 0;
  for (const auto& [name, M] : mods) {
    auto t0 = Clock::now();
    ABReport r = auslander_bridger(M);
    double s = since(t0);
    worst = std::max(worst, s);
    bool ok = r.ok() && s < kAbSecondsPerModule;
    o.pass = o.pass && ok;
    o.report[name] = {{"ker_matches", r.ker_matches}, {"coker_matches", r.coker_matches}};
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "6 modules, slowest %.3f s", worst);
  o.note = buf;
  return o;
}

// 2. The four split criteria agree; split complexes have X' = H(X).
Outcome c2() {
  Outcome o;
  auto t0 = Clock::now();
  int disagreements = 0, split = 0, total = 0;
  for (const char* name : {"QQ", "ZZ", "F5[t]", "F2[x]/(x^2)", "F3[x]/(x^3)", "F2[x,y]/(x^2,xy,y^2)"}) {
    RingP R = ring_named(name);
    int bad = 0, sp = 0;
    for (uint64_t t = 0; t < 200; ++t) {
      TrialVerdict v = run_check("split-criteria", R, json::object(), seed_for(2, t), full(), 2);
      bad += v.status != "pass";
      sp += v.detail.value("split", false);
    }
    o.report[name] = {{"disagreements", bad}, {"split", sp}};
    disagreements += bad;
    split += sp;
    total += 200;
  }
  double s = since(t0);
  o.pass = disagreements <= kMaxDisagreements && s < kSplitSeconds;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d complexes, %d split, %d disagreements, %.1f s", total, split, disagreements, s);
  o.note = buf;
  return o;
}

// 3. Ext^1(C(X), R) = 0 against rho-injectivity.
Outcome c3() {
  Outcome o;
  int bad = 0, tf = 0;
  for (const char* name : {"ZZ", "F2[x]/(x^2)"}) {
    RingP R = ring_named(name);
    int b = 0, f = 0;
    for (uint64_t t = 0; t < 200; ++t) {
      TrialVerdict v = run_check("torsion-free-criterion", R, json::object(), seed_for(3, t), full(), 2);
      b += v.status != "pass";
      f += v.detail.value("star_torsion_free", false);
    }
    o.report[name] = {{"disagreements", b}, {"torsion_free", f}};
    bad += b;
    tf += f;
  }
  o.pass = bad <= kMaxDisagreements;
  o.note = "400 complexes, " + std::to_string(tf) + " *torsion-free, " + std::to_string(bad) + " disagreements";
  return o;
}

// 4. Every complex over a Gorenstein ring of dimension zero is *reflexive.
Outcome c4() {
  Outcome o;
  int bad = 0, periodic = 0;
  for (const char* name : {"F2[x]/(x^2)", "F3[x]/(x^3)"}) {
    RingP R = ring_named(name);
    int b = 0, p = 0;
    for (uint64_t t = 0; t < 100; ++t) {
      Sampler S(R, seed_for(4, t), full(0.5));
      Complex X = S.complex();
      p += !X.bounded();
      b += !is_star_reflexive(X);
    }
    o.report[name] = {{"not_reflexive", b}, {"periodic", p}};
    bad += b;
    periodic += p;
  }
  o.pass = bad == 0;
  o.note = "200 complexes (" + std::to_string(periodic) + " periodic), " + std::to_string(bad) + " not certified";
  return o;
}

// 5. Adjunction transport round trips and the Sigma Omega X -> X section.
Outcome c5() {
  Outcome o;
  int bad = 0, tf = 0;
  for (const char* name : {"ZZ", "F2[x]/(x^2)"}) {
    RingP R = ring_named(name);
    int b = 0, f = 0;
    for (uint64_t t = 0; t < 50; ++t) {
      Sampler S(R, seed_for(5, t), small());
      Complex X = S.bounded();
      LeftApprox L = left_add_approx(X);
      RightApprox RY = right_add_approx(S.bounded());
      ChainMap a = S.chain_map(L.Sigma, RY.X);
      ChainMap b1 = transport_right(L, RY, a);
      bool ok = is_chain_map(b1) && stable_equal(transport_left(L, RY, b1), a);
      ChainMap b2 = S.chain_map(X, RY.Omega);
      ok = ok && stable_equal(transport_right(L, RY, transport_left(L, RY, b2)), b2);
      SigmaOmega so = sigma_omega(X);
      bool torsion_free = is_star_torsion_free(X);
      f += torsion_free;
      ok = ok && so.verified == torsion_free;
      b += !ok;
    }
    o.report[name] = {{"failures", b}, {"torsion_free", f}};
    bad += b;
    tf += f;
  }
  o.pass = bad == 0;
  o.note = "100 instances, " + std::to_string(tf) + " *torsion-free, " + std::to_string(bad) + " failures";
  return o;
}

// 6. Contractions of Omega-tower resolutions.
Outcome c6() {
  Outcome o;
  int bad = 0, runs = 0;
  for (const char* name : {"ZZ", "F2[x]/(x^2)", "F2[x,y]/(x^2,xy,y^2)"}) {
    RingP R = ring_named(name);
    int b = 0;
    for (uint64_t t = 0; t < 10; ++t) {
      Sampler S(R, seed_for(6, t), small());
      Complex X = S.bounded();
      for (int n = 1; n <= 4; ++n) {
        PartialResolution res = build_resolution(X, n);
        Contraction C = contract(res);
        bool ok = check_blocks(C, res).ok() && C.cone_sign != 0 && cohomology_sequence_exact(C);
        b += !ok;
        ++runs;
      }
    }
    o.report[name] = {{"failures", b}};
    bad += b;
  }
  // the two-term resolution of the residue field over F2[x]/(x^2), n = 3
  auto A = ring_named("F2[x]/(x^2)");
  PartialResolution res = two_term_resolution(free_resolution(coker_raw(A, mat(*A, {{"x"}})), 5), 3);
  Contraction C = contract(res);
  bool corner = false, other = false;
  for (int k = -6; k <= 2; ++k) {
    Mat g = C.block(C.Ft.d(k), 0, k + 1, 2, k);
    if (g.r * g.c == 0 || is_zero(*A, g)) continue;
    if (equal(*A, g, mat(*A, {{"1"}})))
      corner = true;
    else
      other = true;
  }
  bool example = corner && !other && check_blocks(C, res).ok() && !check_blocks(C, res).block_zero;
  o.report["two_term_corner"] = example;
  o.pass = bad == 0 && example;
  o.note = std::to_string(runs) + " contractions, " + std::to_string(bad) + " failures; two-term corner " +
           (example ? "reproduced" : "missing");
  return o;
}

// 7. Delta and its L-sequence.
Outcome c7() {
  Outcome o;
  int bad = 0, runs = 0;
  for (const char* name : {"ZZ", "F2[x]/(x^2)"}) {
    RingP R = ring_named(name);
    bool over_z = R->flags.euclidean;
    int b = 0;
    for (uint64_t t = 0; t < 30; ++t) {
      Sampler S(R, seed_for(7, t), small());
      Complex X = S.bounded();
      for (int n = 1; n <= 4; ++n)
        for (int i = 0; i < n; ++i) {
          DeltaComplex D = delta(X, n, i);
          // n - i objects L_{n-1} .. L_i, joined by n - i - 1 arrows
          bool ok = D.lseq.n == n - i && D.lseq_valid && D.terms_add && D.last_null && D.contraction_iso &&
                    D.cohomology_exact;
          if (over_z) {
            ok = ok && delta_localize_check(X, n, i).lseq_split;
          } else {
            ok = ok && is_add(D.Delta);
          }
          b += !ok;
          ++runs;
        }
    }
    o.report[name] = {{"failures", b}};
    bad += b;
  }
  o.pass = bad == 0;
  o.note = std::to_string(runs) + " Delta constructions, " + std::to_string(bad) + " failures";
  return o;
}

// 8. Main duality and quasi-isomorphism duality.
Outcome c8() {
  Outcome o;
  int bad = 0, findings = 0, crashes = 0;
  auto run = [&](const char* name, int bounded, int periodic) {
    RingP R = ring_named(name);
    int f = 0, fd = 0, errs = 0;
    for (int t = 0; t < bounded + periodic; ++t) {
      SamplerConfig c = full(t < bounded ? 0.0 : 1.0);
      for (const char* check : {"duality", "quasi-iso-duality"}) {
        TrialVerdict v = run_check(check, R, json::object(), seed_for(8, uint64_t(t)), c, 2);
        f += v.status == "fail";
        fd += v.status == "finding";
        errs += v.status == "error" || v.status == "unsupported";
      }
    }
    o.report[name] = {{"mode", mode_name(mode_for(*R))}, {"failures", f}, {"findings", fd}, {"errors", errs}};
    bad += f;
    findings += fd;
    crashes += errs;
  };
  for (const char* name : {"ZZ", "F5[t]", "F2[x]/(x^2)", "F3[x]/(x^3)"}) run(name, 500, 100);
  run("F2[x,y]/(x^2,xy,y^2)", 100, 20);
  o.pass = bad == 0 && crashes == 0;
  o.note = "2400 assertion-mode inputs, " + std::to_string(bad) + " failures; observation findings " +
           std::to_string(findings);
  return o;
}

// 9. G-dimension values and total reflexivity.
Outcome c9() {
  Outcome o;
  auto Z = ring_integers();
  auto A = ring_named("F2[x]/(x^2)");
  // hand-derived: Ext^1(Z/2, Z) = Z/2, Ext^2 = 0; k over F2[x]/(x^2) has the periodic x-resolution
  constexpr int kGdimZ2 = 1, kGdimK = 0;
  GDim gz = g_dimension(coker_raw(Z, mat(*Z, {{"2"}})));
  GDim gk = g_dimension(coker_raw(A, mat(*A, {{"x"}})));
  bool pinned = !gz.exceeds && gz.value == kGdimZ2 && !gk.exceeds && gk.value == kGdimK;
  o.report["pinned"] = {{"Z/2", gz.to_json()}, {"k", gk.to_json()}};
  int bad = 0, tr = 0;
  for (const char* name : {"ZZ", "F5[t]", "F2[x]/(x^2)", "F3[x]/(x^3)"}) {
    RingP R = ring_named(name);
    int b = 0, n = 0;
    for (uint64_t t = 0; t < 50; ++t) {
      TrialVerdict v = run_check("totally-reflexive", R, json::object(), seed_for(9, t), full(), 2);
      b += v.status != "pass";
      n += v.detail.value("verdict", false);
    }
    o.report[name] = {{"mismatches", b}, {"totally_reflexive", n}};
    bad += b;
    tr += n;
  }
  o.pass = pinned && bad == 0;
  o.note = "G-dim(Z/2) = " + std::to_string(gz.value) + ", G-dim(k) = " + std::to_string(gk.value) + "; 200 modules, " +
           std::to_string(tr) + " totally reflexive, " + std::to_string(bad) + " mismatches";
  return o;
}

// 10. Tachikawa over random local algebras.
Outcome c10() {
  Outcome o;
  std::mt19937_64 g(seed_for(10, 0));
  int gg = 0, bad = 0, logged = 0;
  json algebras = json::array();
  for (int t = 0; t < 20; ++t) {
    RingP R = random_local_algebra(g, 6);
    TachikawaReport r = tachikawa_check(R, 12);
    gg += r.asserted;
    bad += !r.ok();
    logged += !r.asserted && !r.consistent();
    json e = r.to_json();
    e["algebra"] = R->name();
    e["dim"] = static_cast<const QuotientAlgebra&>(*R).dim;
    algebras.push_back(e);
  }
  o.report["algebras"] = algebras;
  o.pass = bad == 0;
  o.note = "20 algebras, " + std::to_string(gg) + " Gorenstein, " + std::to_string(bad) + " inconsistent, " +
           std::to_string(logged) + " logged";
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> c = {
      {"Auslander-Bridger sequence", c1},  {"split criteria agree", c2},  {"torsion-free criterion", c3},
      {"dimension-zero reflexivity", c4},  {"adjunction round trips", c5}, {"contraction structure", c6},
      {"Delta resolutions", c7},           {"main duality", c8},           {"G-dimension", c9},
      {"Tachikawa consistency", c10}};
  return c;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    Outcome o;
    o.pass = false;
    o.note = std::string("exception: ") + e.what();
    o.report = {{"exception", e.what()}};
    return o;
  }
}

}  // namespace

// With arguments, runs only the listed criteria (1-10) and skips the rerun.
int main(int argc, char** argv) {
  const auto& cs = criteria();
  std::vector<bool> pick(cs.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    int k = std::atoi(argv[a]);
    if (k >= 1 && k <= int(cs.size())) pick[size_t(k - 1)] = true;
  }
  std::vector<std::string> first;
  int failed = 0;
  for (size_t k = 0; k < cs.size(); ++k) {
    if (!pick[k]) {
      first.push_back("");
      continue;
    }
    auto t0 = Clock::now();
    Outcome o = guarded(cs[k].second);
    first.push_back(o.report.dump());
    failed += !o.pass;
    std::printf("criterion %zu: %s - %s (%s; %.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", cs[k].first.c_str(),
                o.note.c_str(), since(t0));
    std::fflush(stdout);
  }
  if (argc > 1) return failed ? 1 : 0;
  // 11: rerun everything concurrently with the same seeds
  auto t0 = Clock::now();
  std::vector<std::future<Outcome>> again;
  for (const auto& c : cs) again.push_back(std::async(std::launch::async, guarded, c.second));
  int differ = 0;
  for (size_t k = 0; k < cs.size(); ++k) differ += again[k].get().report.dump() != first[k];
  bool det = differ == 0;
  failed += !det;
  std::printf("criterion 11: %s - determinism (%zu criteria rerun in parallel, %d reports differ; %.1f s)\n",
              det ? "PASS" : "FAIL", cs.size(), differ, since(t0));
  return failed ? 1 : 0;
}
