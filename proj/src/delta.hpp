#pragma once

#include "contraction.hpp"

namespace stabcx {

// Ladder between the right tower of X and a left tower built down from
// Omega^n X. Level j (i <= j < n):
//   Omega^{j+1}X -q_{j+1}-> F_j -p_j-> Omega^j X
//        ^ v_{j+1}           ^ a_j       ^ v_j
//   Xs_{j+1} ----q^{j+1}---> G_j -p^j-> Xs_j = Cone(q^{j+1})
// with G_j = Gl_j + F_j, q^{j+1} = (left approximation; q_{j+1} v_{j+1}) and
// a_j = [0, 1], so every square commutes on the nose and a_j is onto.
struct CounitData {
  int n = 0, i = 0;
  std::vector<RightApprox> right;      // right[j] approximates Omega^j X
  std::vector<Complex> Xs;             // Xs[j], j = i..n; Xs[n] = Omega^n X
  std::vector<ChainMap> v;             // v[j] : Xs[j] -> Omega^j X, v[n] = 1
  std::vector<LeftApprox> left;        // left[j] approximates Xs[j+1]
  std::vector<Complex> G;              // G[j] = Gl_j + F_j
  std::vector<ChainMap> q, p, a;       // q[j] : Xs[j+1] -> G[j], p[j] : G[j] -> Xs[j], a[j] : G[j] -> F_j
  ChainMap pi;                         // v[i] : Sigma^{n-i} Omega^n X -> Omega^i X
  bool surjective = false;             // H(pi) onto in every degree of the window
  bool squares = false;                // ladder squares checked on the nose
  json to_json() const;
};
CounitData counit(const Complex& X, int n, int i);

struct DeltaComplex {
  CounitData cd;
  Complex Delta;                  // Cone(pi)[-1]
  ChainMap incl;                  // Delta -> Xs[i]
  bool cohomology_exact = false;  // 0 -> H(Delta) -> H(Xs_i) -> H(Omega^i X) -> 0
  // X^L_m = Delta_{i+m}, F^L_m = L_{i+m} = Gl_{i+m}; the last object is a null complex.
  PartialResolution lseq;
  bool lseq_valid = false;
  bool terms_add = false;         // every L_j has zero differential
  bool last_null = false;
  bool contraction_iso = false;   // phi : contraction of lseq -> Delta is a homotopy equivalence
  bool window_certified = false;
  json to_json() const;
};
DeltaComplex delta(const Complex& X, int n, int i, int margin = 2);

struct DeltaLocalReport {
  bool stable_iso = false;      // S^-1 Delta_R ~ Delta_Q(S^-1 X) stably, with witnesses
  bool lseq_split = false;      // localized omegas of the L-sequence are null
  bool lseq_generic = false;    // classification flag over R
  json certificate;
  json to_json() const;
};
DeltaLocalReport delta_localize_check(const Complex& X, int n, int i, int margin = 2);

}  // namespace stabcx
