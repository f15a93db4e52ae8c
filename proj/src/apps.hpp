#pragma once

#include <random>

#include "delta.hpp"
#include "sampler.hpp"

namespace stabcx {

// Assertion mode over generically Gorenstein rings, observation otherwise.
enum class Mode { Assertion, Observation };
Mode mode_for(const Ring& R);
const char* mode_name(Mode m);

// Both sides of an "if and only if" computed independently.
struct Verdict {
  Mode mode = Mode::Observation;
  bool lhs = false, rhs = false;
  bool agree() const { return lhs == rhs; }
  // False only for a disagreement in assertion mode.
  bool ok() const { return mode == Mode::Observation || agree(); }
  bool finding() const { return mode == Mode::Observation && !agree(); }
  json to_json() const;
};

// H(X) = 0 against H(X*) = 0.
Verdict duality_check(const Complex& X);
// f quasi-iso against f* quasi-iso, via acyclicity of the two cones.
Verdict quasi_iso_duality(const ChainMap& f);

// Bounded complex with the terms and differentials of X in degrees [a, b].
Complex truncate(const Complex& X, int a, int b);

struct PerpReport {
  bool hypothesis = false;  // H(X*) = 0
  int maps = 0;             // chain map generators tested
  int null = 0;             // of which null-homotopic with a checked witness
  json targets;             // per target: name, generator count, witnesses
  bool ok() const { return !hypothesis || maps == null; }
  json to_json() const;
};
// Chain maps from X into each R[-j] around the window of X and into each of
// `extra` (bounded complexes with a finite Add(R)-resolution), all of which
// should be null-homotopic when H(X*) = 0.
PerpReport perp_check(const Complex& X, const std::vector<Complex>& extra = {}, int margin = 2);

struct OmegaStarReport {
  bool skipped = false;
  std::string reason;
  std::vector<StarCert> certs;  // Omega^0 X .. Omega^r X
  bool ext_vanish = false;      // Ext^s(H^i(X), R) = 0, 1 <= s <= horizon
  int horizon = 0;
  bool ok() const;
  json to_json() const;
};
OmegaStarReport omega_star_checks(const Complex& X, int r);

// The conditional statement: Y *torsion-free and Omega Y *reflexive imply
// Ext^1(H^i(Y), R) = 0 in every degree.
struct ExtOneReport {
  bool hypotheses = false;
  bool conclusion = false;
  bool ok() const { return !hypotheses || conclusion; }
  json to_json() const;
};
ExtOneReport ext_one_check(const Complex& Y);

// Default Ext horizon: 2 dim_k R over Artinian kinds, 2 over euclidean kinds,
// number of variables + 1 over polynomial rings, 1 over fields.
int default_horizon(const Ring& R);

struct ReflexivityVerdict {
  int horizon = 0;
  bool gorenstein_rule = false;  // decided by Ext^{>0}(M, R) = 0 alone
  bool verdict = false;
  bool reflexive = false, ext_m = false, ext_dual = false;  // the three conditions
  int first_ext = 0;            // first i <= horizon with Ext^i(M, R) != 0, else 0
  bool definition() const { return reflexive && ext_m && ext_dual; }
  json to_json() const;
};
ReflexivityVerdict is_totally_reflexive(const PresentedModule& M, int horizon = 0);

struct GDim {
  int horizon = 0;
  int value = 0;         // sup { i <= horizon : Ext^i(M, R) != 0 }, 0 if none
  bool exceeds = false;  // Ext^horizon != 0, so the sup may be larger
  bool zero_module = false;
  std::string str() const;
  json to_json() const;
};
GDim g_dimension(const PresentedModule& M, int horizon = 0);
// Least n <= bound with the n-th syzygy projective, or -1.
int projective_dimension(const PresentedModule& M, int bound);

// 0 -> M -> P_0 -> ... -> P_depth from a resolution of M* dualized, spliced
// onto a resolution G of M: degrees -depth-1 .. -1 carry G_depth .. G_0 and
// degrees 0 .. depth carry P_0 .. P_depth.
struct SyzygyWitness {
  Complex coresolution;  // P_0 .. P_depth in degrees 0 .. depth
  Complex spliced;
  bool exact = false;       // H^k(spliced) = 0 for -depth <= k < depth
  bool dual_exact = false;  // the same for spliced*
  json to_json() const;
};
SyzygyWitness infinite_syzygy_witness(const PresentedModule& M, int depth);

// Base-field dual of an Artinian local algebra with (r phi)(s) = phi(r s).
PresentedModule canonical_module(RingP R);
struct TachikawaReport {
  int horizon = 0;
  std::vector<bool> ext_zero;  // Ext^i(omega, R) = 0 for i = 1..horizon
  bool ext_vanish = false;
  bool gorenstein = false;     // socle dimension one
  bool asserted = false;       // consistency asserted (ring flagged generically Gorenstein)
  bool consistent() const { return ext_vanish == gorenstein; }
  bool ok() const { return !asserted || consistent(); }
  json to_json() const;
};
TachikawaReport tachikawa_check(RingP R, int horizon = 0);
// Local F_p-algebra of dimension <= max_dim from random monomial and binomial relations.
RingP random_local_algebra(std::mt19937_64& g, size_t max_dim = 6);

// Experiments.
struct ExperimentConfig {
  json ring;
  SamplerConfig sampler;
  json fixture;  // a fixed complex used by every trial instead of sampling
  int trials = 1;
  uint64_t seed = 0;
  int threads = 1;
  int margin = 2;
  std::vector<std::string> checks;
};
ExperimentConfig experiment_from_json(const json& j);
const std::vector<std::string>& registered_checks();

struct TrialVerdict {
  uint64_t seed = 0;
  std::string status;  // pass, fail, finding, skip, unsupported
  json detail;
};
struct TheoremReport {
  std::string check;
  std::vector<TrialVerdict> verdicts;
  std::vector<json> counterwitnesses;  // self-contained fixtures
  int count(const std::string& status) const;
  json to_json() const;
};
struct ExperimentReport {
  json config;
  std::vector<TheoremReport> reports;
  bool failed() const;
  json to_json() const;
  std::string table() const;
};
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Runs one named check on one input; the input is drawn from the trial seed
// unless the fixture carries it.
TrialVerdict run_check(const std::string& check, RingP R, const json& input, uint64_t seed,
                       const SamplerConfig& sc, int margin);
// Replays a counterwitness fixture; returns the recomputed verdict.
TrialVerdict replay_fixture(const json& fixture);

}  // namespace stabcx
