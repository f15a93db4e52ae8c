#pragma once

#include "stable.hpp"

namespace stabcx {

// A -u-> B -v-> C -w-> A[1] is certified by theta : Cone(u) -> C built from a
// null-homotopy of v u, checked to be a homotopy equivalence with w theta ~ out.
struct TriangleCert {
  bool ok = false;
  bool window_certified = false;
  std::string failure;
  std::optional<ChainMap> theta, theta_inv;
};
TriangleCert certify_triangle(const ChainMap& u, const ChainMap& v, const ChainMap& w, int margin = 2);
// Third map w : C -> A[1] making (u, v, w) a triangle, when Cone(u) ~ C via v.
std::optional<ChainMap> complete_triangle(const ChainMap& u, const ChainMap& v, int margin = 2);

// b a = 0 and ker b inside im a.
bool exact_at(const ModuleMap& a, const ModuleMap& b);

// Maps for Cone(f) -> C from g f = dH + Hd, and A -> Cone(g)[-1] from the same data.
ChainMap from_cone(const ChainMap& f, const ChainMap& g, const Homotopy& H);
ChainMap into_cone_shift(const ChainMap& f, const ChainMap& g, const Homotopy& H);

// 0 -> X_n -> F_{n-1} -> ... -> F_0 -> X_0 -> 0 given by triangles
// X_{i+1} -q[i]-> F_i -p[i]-> X_i -omega[i]-> X_{i+1}[1].
struct PartialResolution {
  int n = 0;
  std::vector<Complex> X;  // X_0 .. X_n
  std::vector<Complex> F;  // F_0 .. F_{n-1}, zero differential
  std::vector<ChainMap> q, p, omega;
  ChainMap f(int i) const;  // f_i = q_i p_i : F_i -> F_{i-1}, 1 <= i < n
  ChainMap connecting() const;  // omega_{n-1}[n-1] ... omega_1[1] omega_0 : X_0 -> X_n[n]
};

PartialResolution build_resolution(const Complex& X, int n);
// Throws a validation error naming the first failing step.
void validate_resolution(const PartialResolution& res, int margin = 2);
PartialResolution resolution_from_json(const json& j);
json resolution_json(const PartialResolution& res);

// The resolution F_i = P_i + P_{i+2}[1] of the two-term complex [P_1 -> P_0]
// cut from a free resolution P (needs length >= n + 1).
PartialResolution two_term_resolution(const FreeResolution& P, int n);
// 0 -> R -a-> R -0-> R[1] -a-> R[1] -> 0.
PartialResolution nzd_resolution(RingP R, const Elem& a);

struct Contraction {
  int n = 0;
  Complex Ft;
  std::vector<Complex> parts;  // parts[i] = F_i[i]
  ChainMap psi, phi;           // X_n[n-1] -> Ft -> X_0
  ChainMap omega_t;            // connecting morphism X_0 -> X_n[n]
  // inductive stages: stage m holds the contraction of the first m triangles
  struct Stage {
    Complex Ft;
    ChainMap psi, phi, alpha;  // alpha : F_{m-1}[m-2] -> previous Ft (m >= 2)
  };
  std::vector<Stage> stages;   // stages[m - 1]
  int cone_sign = 0;           // s with (psi, phi, s * omega_t) certified, 0 if not
  TriangleCert cone_cert;
  size_t offset(int i, int k) const;  // row/column of block F_i[i] inside Ft^k
  Mat block(const Mat& m, int j, int kr, int i, int kc) const;  // pr_j m in_i
  ChainMap in(int i) const;   // graded inclusion, a chain map only for i = 0
  ChainMap pr(int i) const;   // graded projection, a chain map only for i = n - 1
};
Contraction contract(const PartialResolution& res, int margin = 2);

struct BlockReport {
  bool lower = false;        // pr_j d in_i = 0 for i <= j
  bool subdiagonal = false;  // pr_{i-1} d in_i = f_i[i]
  bool psi_corner = false;   // pr_{n-1} psi = q_n[n-1]
  bool phi_corner = false;   // phi in_0 = p_0
  bool block_zero = false;   // pr_j d in_i = 0 unless j = i - 1
  bool ok() const { return lower && subdiagonal && psi_corner && phi_corner; }
  json to_json() const;
};
BlockReport check_blocks(const Contraction& C, const PartialResolution& res);

// 0 -> H(X_n)[n-1] -> H(Ft) -> H(X_0) -> 0 exact in every degree of the window.
bool cohomology_sequence_exact(const Contraction& C);

enum class Degeneracy { Witnessed, NotForConstruction, Unknown };
std::string degeneracy_name(Degeneracy d);
struct Classification {
  bool split = false;
  Degeneracy degenerate = Degeneracy::Unknown;
  std::string degenerate_how;
  std::optional<bool> generically_split;  // empty when no total quotient ring exists
  json to_json() const;
};
Classification classify(const PartialResolution& res, int margin = 2);
Classification classify(const PartialResolution& res, const Contraction& C, int margin = 2);
// Unipotent lower block-triangular theta with d_Ft theta = theta d_deg, if any.
std::optional<ChainMap> degenerate_conjugation(const Contraction& C, const PartialResolution& res);

// Contraction with d = subdiagonal f_i only, for graded-exact resolutions
// with Add(R) ends; throws a precondition error naming the failed hypothesis.
Contraction graded_exact_degenerate(const PartialResolution& res, int margin = 2);
// Coproduct over k of the strands 0 -> F_{n-1}^k -> ... -> F_0^k -> 0 (F_j^k in
// degree k - j), with the reordering isomorphism onto the degenerate contraction.
struct StrandSum {
  Complex sum;
  ChainMap iso;  // sum -> Ft
  bool verified = false;
};
StrandSum strand_coproduct(const PartialResolution& res, const Contraction& degenerate);

struct ResolutionMap {
  PartialResolution top, bottom;  // bottom -> top
  std::vector<ChainMap> t;        // t_i : Y_i -> X_i, 0 <= i <= n
  std::vector<ChainMap> s;        // s_i : G_i -> F_i
};
void validate_ladder(const ResolutionMap& m, int margin = 2);
struct ContractedMap {
  ChainMap st;  // Gt -> Ft
  bool lower_triangular = false, diagonal = false, pr_square = false;
  bool psi_square = false, phi_square = false;
  json to_json() const;
};
ContractedMap contract_morphism(const ResolutionMap& m, const Contraction& top, const Contraction& bottom,
                                int margin = 2);

struct PrNullReport {
  bool left_inverse = false;
  bool witness_ok = false;
  bool null = false;  // independent null-homotopy solve
  std::optional<bool> localized_left_inverse, localized_null;
  json witness;
  json to_json() const;
};
PrNullReport pr_null_check(const PartialResolution& res, const Contraction& C, int margin = 2);

}  // namespace stabcx
