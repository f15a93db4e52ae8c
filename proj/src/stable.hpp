#pragma once

#include "complex.hpp"

namespace stabcx {

bool is_add(const Complex& X);  // split, i.e. a summand of shifted free modules
bool is_cohomologically_surjective(const ChainMap& f);

// Cancels unit entries of the differentials (bounded complexes); the result is
// homotopy equivalent to X via the recorded maps and minimal over local kinds.
struct Reduction {
  Complex Y;
  ChainMap to, from;  // X -> Y, Y -> X
};
Reduction minimize(const Complex& X);
// minimize, then drop coordinates that are isolated summands R[-k].
Reduction stable_core(const Complex& X);

// Omega X -q-> F -p-> X -omega-> Omega X[1] with Omega X = Cone(p)[-1];
// h is the null-homotopy of p q.
struct RightApprox {
  Complex X, F, Omega;
  ChainMap p, q, omega;
  Homotopy h;
};
RightApprox right_add_approx(const Complex& X);

// X -q-> G -g-> Sigma X -r-> X[1] with Sigma X = Cone(q) and q* a right approximation of X*.
struct LeftApprox {
  Complex X, G, Sigma;
  ChainMap q, g, r;
};
LeftApprox left_add_approx(const Complex& X);

std::vector<RightApprox> syzygy_tower(const Complex& X, int n);
std::vector<LeftApprox> cosyzygy_tower(const Complex& X, int n);
Complex syzygy(const Complex& X, int n);
Complex cosyzygy(const Complex& X, int n);

// Induced map Omega(a) : Omega X -> Omega Y for a : X -> Y.
ChainMap omega_map(const RightApprox& AX, const RightApprox& AY, const ChainMap& a, int margin = 2);

bool factors_through_add(const ChainMap& f, int margin = 2);
bool stable_equal(const ChainMap& f, const ChainMap& g, int margin = 2);
bool stable_iso_verify(const ChainMap& f, const ChainMap& g, int margin = 2);

// Map Cone(f) -> Cone(g) from a square with g u - v f = d H + H d.
ChainMap cone_map_h(const ChainMap& f, const ChainMap& g, const ChainMap& u, const ChainMap& v, const Homotopy& H);

// Adjunction: a : Sigma X -> Y  <->  b : X -> Omega Y.
ChainMap transport_right(const LeftApprox& LX, const RightApprox& RY, const ChainMap& a, int margin = 2);
ChainMap transport_left(const LeftApprox& LX, const RightApprox& RY, const ChainMap& b, int margin = 2);
// Counit Sigma Omega X -> X and unit X -> Omega Sigma X.
ChainMap counit(const RightApprox& RX, const LeftApprox& LOX, int margin = 2);
ChainMap unit(const LeftApprox& LX, const RightApprox& RSX, int margin = 2);

struct StarCert {
  bool torsion_free = false, reflexive = false;
  bool rho_injective = false, rho_bijective = false;
  bool ext12_vanish = false;  // sufficient condition for *reflexive
  bool window_certified = false;
  int first_failure = 0;
  bool agree() const { return torsion_free == rho_injective; }
  json to_json() const;
};
// Decided by Ext^1(C^i(X), R) = 0 and cross-checked against rho^i_{X,R}.
StarCert star_certificate(const Complex& X);
bool is_star_torsion_free(const Complex& X);
bool is_star_reflexive(const Complex& X);

// pi : Sigma Omega X -> X together with a stable section s (pi s + p t ~ 1 for
// the right approximation p), found by one lifting solve when it exists.
struct SigmaOmega {
  RightApprox RX;
  LeftApprox LOX;
  ChainMap pi;
  std::optional<ChainMap> section;
  bool verified = false;  // stable_iso_verify(pi, section)
};
SigmaOmega sigma_omega(const Complex& X, int margin = 2);

// H^k(f) on the chosen generators, and the induced map on R-duals.
ModuleMap cohomology_map(const ChainMap& f, int k);
ModuleMap dual_module_map(const ModuleMap& f);

Complex localize_complex(const Complex& X);
struct VanishReport {
  bool hypotheses = false;  // X *torsion-free and F in Add(R)
  bool localized_null = false;
  bool null = false;
  std::optional<Homotopy> witness;
  json certificate;  // witness homotopy, or null
  bool consistent() const { return !hypotheses || !localized_null || null; }
  json to_json() const;
};
VanishReport generic_vanish_check(const ChainMap& f, int margin = 2);

}  // namespace stabcx
