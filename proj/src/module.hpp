#pragma once

#include <optional>
#include <vector>

#include "linalg.hpp"

namespace stabcx {

// coker(rel : R^m -> R^n).
struct PresentedModule {
  RingP R;
  size_t n = 0;
  Mat rel;  // n x m
};

// Matrix on generators, dst.n x src.n.
struct ModuleMap {
  PresentedModule src, dst;
  Mat f;
};

PresentedModule free_module(RingP R, size_t n);
PresentedModule coker_raw(RingP R, const Mat& A);
// Cokernel, canonicalized: Smith diagonal over euclidean kinds, minimal otherwise.
PresentedModule cokernel_presentation(RingP R, const Mat& A);

// Removes superfluous generators and relations. fwd maps old generator
// coordinates to new ones (n_new x n_old), back the other way.
PresentedModule prune(const PresentedModule& M, Mat* fwd = nullptr, Mat* back = nullptr);

// (im G + im W) / im W, generated by a minimal subset or combination of the columns of G.
PresentedModule subquotient(RingP R, const Mat& G, const Mat& W, Mat* gens = nullptr);

bool is_zero_module(const PresentedModule& M);
bool map_well_defined(const ModuleMap& f);
bool map_is_injective(const ModuleMap& f);
bool map_is_surjective(const ModuleMap& f);
PresentedModule map_kernel(const ModuleMap& f, Mat* gens = nullptr);
PresentedModule map_cokernel(const ModuleMap& f);

// Isomorphism invariants: dimension over fields, invariant factors plus free
// rank over euclidean kinds, dim m^j M over local algebras. Over polynomial
// rings only vanishing is compared.
json invariants(const PresentedModule& M);
bool same_invariants(const PresentedModule& A, const PresentedModule& B);
std::string module_str(const PresentedModule& M);
json module_json(const PresentedModule& M);
PresentedModule module_from_json(const json& j);

// maps[k] : P_{k+1} -> P_k, k = 0..length-1; P_0 = R^{M.n}, maps[0] presents M.
struct FreeResolution {
  RingP R;
  std::vector<size_t> ranks;  // P_0 .. P_length
  std::vector<Mat> maps;
};
FreeResolution free_resolution(const PresentedModule& M, size_t length);
bool resolution_exact(const FreeResolution& F);

PresentedModule dual_module(const PresentedModule& M, Mat* gens = nullptr);
ModuleMap biduality_map(const PresentedModule& M);
PresentedModule transpose(const PresentedModule& M);
PresentedModule hom_module(const PresentedModule& M, const PresentedModule& N, Mat* gens = nullptr);

// Z / B where Z = {x : Dout x in im Bout} and B = im Din + im Bmid.
PresentedModule cohomology_presented(RingP R, const Mat& Din, const Mat& Dout, const Mat& Bmid, const Mat& Bout,
                                     Mat* gens = nullptr);

PresentedModule ext_from(const FreeResolution& F, const PresentedModule& N, size_t i);
PresentedModule tor_from(const FreeResolution& F, const PresentedModule& N, size_t i);
PresentedModule ext(const PresentedModule& M, const PresentedModule& N, size_t i);
PresentedModule tor(const PresentedModule& M, const PresentedModule& N, size_t i);

bool is_projective(const PresentedModule& M);
PresentedModule torsion_submodule(const PresentedModule& M);
bool is_torsionless(const PresentedModule& M);
bool is_reflexive(const PresentedModule& M);

// 0 -> Ext^1(Tr M, R) -> M -> M** -> Ext^2(Tr M, R) -> 0, compared term by term.
struct ABReport {
  bool ker_matches = false, coker_matches = false;
  PresentedModule ext1, ext2, ker, coker;
  bool ok() const { return ker_matches && coker_matches; }
};
ABReport auslander_bridger(const PresentedModule& M);

}  // namespace stabcx
