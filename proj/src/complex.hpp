#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "module.hpp"

namespace stabcx {

// Degree range [lo, hi] stored explicitly. A right tail of period rp repeats
// the last rp stored degrees forever; a left tail of period lp repeats the
// first lp. Period 0 means the sequence is zero beyond that end.
struct Layout {
  int lo = 0, hi = -1;
  int lp = 0, rp = 0;
  bool bounded() const { return lp == 0 && rp == 0; }
  // Stored index for degree k, or -1 when k is beyond a bounded end.
  long index(int k) const;
  // Degrees whose data determine everything: the window and one step past each end.
  int first() const { return lo - 1; }
  int last() const { return hi + 1; }
};

Layout layout_shift(const Layout& L, int off);  // layout of k -> S(k + off)
Layout layout_union(const std::vector<Layout>& Ls);
json layout_json(const Layout& L);

// Degreewise matrices sharing a layout.
struct MatSeq {
  Layout L;
  std::vector<Mat> v;
  const Mat* find(int k) const {
    long i = L.index(k);
    return i < 0 ? nullptr : &v[size_t(i)];
  }
};

// Cochain complex of finite-rank free modules; d(k) : X^k -> X^{k+1} is a
// rank(k+1) x rank(k) matrix acting on column vectors.
struct Complex {
  RingP R;
  Layout L;
  std::vector<size_t> rk;
  std::vector<Mat> dv;
  size_t rank(int k) const {
    long i = L.index(k);
    return i < 0 ? 0 : rk[size_t(i)];
  }
  Mat d(int k) const;
  bool bounded() const { return L.bounded(); }
};

// Degree-zero chain map X -> Y; f(k) is Y.rank(k) x X.rank(k).
struct ChainMap {
  Complex X, Y;
  MatSeq f;
  Mat at(int k) const;
};

// h(k) : X^k -> Y^{k-1}.
struct Homotopy {
  MatSeq h;
  bool window_certified = false;  // solved on a truncation of periodic tails
  Mat at(const Complex& X, const Complex& Y, int k) const;
};

// Builders evaluate rank/matrix callbacks over the layout (with a margin on
// periodic sides), check that the callbacks really repeat with the stated
// periods, and trim zero degrees at bounded ends.
Complex make_complex(RingP R, Layout L, const std::function<size_t(int)>& rank,
                     const std::function<Mat(int)>& d);
ChainMap make_map(const Complex& X, const Complex& Y, const std::vector<Layout>& extra,
                  const std::function<Mat(int)>& f);
MatSeq make_seq(const Ring& R, Layout L, const std::function<Mat(int)>& f);

Complex zero_complex(RingP R);
// Bounded complex with X^lo .. X^{lo+ranks.size()-1}; ds[j] = d(lo + j).
Complex bounded_complex(RingP R, int lo, const std::vector<size_t>& ranks, const std::vector<Mat>& ds);
// Module concentrated in one degree with zero differential: R^n[-k].
Complex free_in_degree(RingP R, size_t n, int k);
bool valid_complex(const Complex& X);
bool equal_complex(const Complex& X, const Complex& Y);

Complex shift(const Complex& X, int m);  // X[m]^k = X^{k+m}, d -> (-1)^m d
Complex dual(const Complex& X);          // (X*)^n = (X^{-n})*, d^n = (d^{-n-1})^T
Complex direct_sum(const std::vector<Complex>& parts);
Complex locally_finite_coproduct(const std::vector<Complex>& parts);
Complex cone(const ChainMap& f);  // Cone^k = X^{k+1} + Y^k, d = [[-dX, 0], [f, dY]]
Complex localize(const Complex& X);
Complex koszul_tensor(const Complex& X, const std::vector<Elem>& xs);

ChainMap identity(const Complex& X);
ChainMap zero_map(const Complex& X, const Complex& Y);
ChainMap compose(const ChainMap& g, const ChainMap& f);  // g o f
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap sub(const ChainMap& f, const ChainMap& g);
ChainMap neg(const ChainMap& f);
ChainMap shift_map(const ChainMap& f, int m);
ChainMap dual_map(const ChainMap& f);  // Y* -> X*
ChainMap sum_map(const std::vector<ChainMap>& fs);  // block diagonal
ChainMap localize_map(const ChainMap& f);
// Y -> Cone(f) and Cone(f) -> X[1].
ChainMap cone_in(const ChainMap& f);
ChainMap cone_out(const ChainMap& f);
// Map Cone(f) -> Cone(g) from a strictly commuting square g u = v f.
ChainMap cone_map(const ChainMap& f, const ChainMap& g, const ChainMap& u, const ChainMap& v);
bool is_chain_map(const ChainMap& f);
bool equal_map(const ChainMap& f, const ChainMap& g);
bool is_zero_map(const ChainMap& f);

// Cohomology and the cokernel, boundary and cycle modules in each degree.
PresentedModule cohomology(const Complex& X, int k, Mat* gens = nullptr);
struct CBZ {
  PresentedModule C, B, Z;
  Mat Bgens, Zgens;
};
CBZ cbz(const Complex& X, int k);
bool is_acyclic(const Complex& X);
bool is_quasi_iso(const ChainMap& f);

// Banded system: equations A_k u_k + B_k u_{k+1} = c_k for k in [e0, e1];
// unknowns u_k exist for k in [a, b]. Returns one solution or nullopt.
struct BandSystem {
  int a = 0, b = -1, e0 = 0, e1 = -1;
  std::function<size_t(int)> usize;
  std::function<Mat(int)> A, B, c;
};
std::optional<std::vector<Mat>> solve_band(const Ring& R, const BandSystem& S);

// f = dY h + h dX. Over periodic layouts, solved on the window widened by
// `margin` periods on each tailed side; the witness is then window-certified.
std::optional<Homotopy> null_homotopy(const ChainMap& f, int margin = 2);
bool check_homotopy(const ChainMap& f, const Homotopy& h, int margin = 2);
bool homotopic(const ChainMap& f, const ChainMap& g, int margin = 2);
// Solve u with f ~ u o g (u : target(g) -> target(f)) up to homotopy, if possible.
std::optional<ChainMap> factor_through(const ChainMap& f, const ChainMap& g, int margin = 2);
// Lift: find a chain map u with g o u ~ f (f : Z -> Y, g : W -> Y).
std::optional<ChainMap> lift_through(const ChainMap& f, const ChainMap& g, int margin = 2);
// Chain maps X -> Y modulo null-homotopic ones (bounded complexes only).
PresentedModule homotopy_hom(const Complex& X, const Complex& Y, Mat* gens = nullptr);
// Generators of the module of all chain maps X -> Y (bounded complexes only).
std::vector<ChainMap> chain_map_generators(const Complex& X, const Complex& Y);

// Split criteria: d s d = d, C(X) projective, B(X) a summand, explicit decomposition.
struct SplitReport {
  bool dsd = false, c_projective = false, b_summand = false, decomposed = false;
  bool agree() const { return dsd == c_projective && dsd == b_summand && dsd == decomposed; }
};
SplitReport split_criteria(const Complex& X);
bool is_split(const Complex& X);
struct SplitDecomposition {
  Complex Xp, N;  // Xp has zero differential, N is null
  ChainMap to_sum, from_sum;  // X <-> Xp + N
};
std::optional<SplitDecomposition> split_decompose(const Complex& X);

// rho : H^{-i}(Hom(X, M)) -> Hom(H^i(X), M); sigma : H^i(X) (x) M -> H^i(X (x) M).
ModuleMap rho_map(const Complex& X, const PresentedModule& M, int i);
ModuleMap sigma_map(const Complex& X, const PresentedModule& M, int i);
PresentedModule hom_complex_cohomology(const Complex& X, const PresentedModule& M, int n, Mat* gens = nullptr);
PresentedModule tensor_complex_cohomology(const Complex& X, const PresentedModule& M, int n, Mat* gens = nullptr);

struct SequencesReport {
  bool rho_kernel = false;   // ker rho = Ext^1(C^{i+1}, M)
  bool rho_middle = false;   // im rho = ker(Hom(H^i, M) -> Ext^2(C^{i+1}, M))
  bool ext2_consistent = false;
  bool sigma_kernel = false;  // ker sigma = im(Tor_2(C^{i+1}, M))
  bool sigma_cokernel = false;
  bool ok() const { return rho_kernel && rho_middle && ext2_consistent && sigma_kernel && sigma_cokernel; }
  json to_json() const;
};
SequencesReport ab_sequences_check(const Complex& X, const PresentedModule& M, int i);

json complex_json(const Complex& X);
Complex complex_from_json(const json& j, RingP R = nullptr);
json map_json(const ChainMap& f);
ChainMap map_from_json(const json& j, const Complex& X, const Complex& Y);
json homotopy_json(const Complex& X, const Complex& Y, const Homotopy& h);
std::string complex_str(const Complex& X);

}  // namespace stabcx
