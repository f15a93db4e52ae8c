#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ring.hpp"

namespace stabcx {

// Dense row-major matrix; the ring is always passed alongside.
struct Mat {
  size_t r = 0, c = 0;
  std::vector<Elem> a;
  Elem& operator()(size_t i, size_t j) { return a[i * c + j]; }
  const Elem& operator()(size_t i, size_t j) const { return a[i * c + j]; }
};

Mat zeros(const Ring& R, size_t r, size_t c);
Mat eye(const Ring& R, size_t n);
Mat mul(const Ring& R, const Mat& A, const Mat& B);
Mat add(const Ring& R, const Mat& A, const Mat& B);
Mat sub(const Ring& R, const Mat& A, const Mat& B);
Mat neg(const Ring& R, const Mat& A);
Mat scale(const Ring& R, const Elem& s, const Mat& A);
Mat transpose(const Mat& A);
Mat hcat(const Ring& R, const std::vector<Mat>& parts, size_t rows);
Mat vcat(const Ring& R, const std::vector<Mat>& parts, size_t cols);
Mat block(const Mat& A, size_t r0, size_t c0, size_t nr, size_t nc);
void set_block(Mat& A, size_t r0, size_t c0, const Mat& B);
Mat kron(const Ring& R, const Mat& A, const Mat& B);
Mat col(const Mat& A, size_t j);
Mat cols(const Mat& A, const std::vector<size_t>& idx);
Mat rows_of(const Mat& A, const std::vector<size_t>& idx);
Mat vec(const Mat& A);  // column-major stacking
Mat unvec(const Mat& v, size_t r, size_t c);
bool is_zero(const Ring& R, const Mat& A);
bool equal(const Ring& R, const Mat& A, const Mat& B);
Mat map_entries(const Ring& to, const Mat& A, const std::function<Elem(const Elem&)>& f);
// Direct sum of blocks along the diagonal.
Mat diag_blocks(const Ring& R, const std::vector<Mat>& blocks);

// A X = B, free choices zero. nullopt iff some column of B is outside im A.
std::optional<Mat> solve(const Ring& R, const Mat& A, const Mat& B);
// Columns generate {x : A x = 0}; a basis over euclidean kinds and fields.
Mat kernel(const Ring& R, const Mat& A);
bool in_image(const Ring& R, const Mat& A, const Mat& B);
// Generators of (im G + im W)/im W, as combinations of the columns of G.
Mat min_gens(const Ring& R, const Mat& G, const Mat& W);
// Replaces the columns of K by combinations whose top `top` rows minimally
// generate the image of the top part; columns with vanishing top part are dropped.
Mat reduce_top(const Ring& R, const Mat& K, size_t top);

// Smith form U A V = D over euclidean kinds, with d_1 | d_2 | ... normalized.
struct SmithForm {
  Mat D, U, Uinv, V;
  std::vector<Elem> diag;  // nonzero invariant factors
};
SmithForm smith(const Ring& R, const Mat& A);

// Base-field expansion of a matrix over a local algebra: (d r) x (d c).
struct FpMat;
FpMat expand_local(const QuotientAlgebra& A, const Mat& M);
FpMat expand_vec(const QuotientAlgebra& A, const Mat& v);  // (d r) x c coordinates
Mat contract_vec(const QuotientAlgebra& A, const FpMat& x, size_t rows);
// F_p-dimension of the submodule generated by the columns of M.
size_t local_span_dim(const QuotientAlgebra& A, const Mat& M);

std::string mat_str(const Ring& R, const Mat& A);
json mat_json(const Ring& R, const Mat& A);
Mat mat_from_json(const Ring& R, const json& j, size_t rows, size_t cols);

}  // namespace stabcx
