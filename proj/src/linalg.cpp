#include "linalg.hpp"

#include <algorithm>

#include "fp.hpp"
#include "groebner.hpp"

namespace stabcx {

// ---------------------------------------------------------------- basics

Mat zeros(const Ring& R, size_t r, size_t c) {
  Mat M;
  M.r = r;
  M.c = c;
  M.a.assign(r * c, R.zero());
  return M;
}

Mat eye(const Ring& R, size_t n) {
  Mat M = zeros(R, n, n);
  for (size_t i = 0; i < n; ++i) M(i, i) = R.one();
  return M;
}

Mat mul(const Ring& R, const Mat& A, const Mat& B) {
  if (A.c != B.r) fail(Err::Argument, "matrix product shape mismatch");
  Mat C = zeros(R, A.r, B.c);
  for (size_t i = 0; i < A.r; ++i)
    for (size_t k = 0; k < A.c; ++k) {
      const Elem& a = A(i, k);
      if (R.is_zero(a)) continue;
      for (size_t j = 0; j < B.c; ++j) {
        const Elem& b = B(k, j);
        if (R.is_zero(b)) continue;
        C(i, j) = R.add(C(i, j), R.mul(a, b));
      }
    }
  return C;
}

Mat add(const Ring& R, const Mat& A, const Mat& B) {
  if (A.r != B.r || A.c != B.c) fail(Err::Argument, "matrix sum shape mismatch");
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
  return C;
}

Mat sub(const Ring& R, const Mat& A, const Mat& B) {
  if (A.r != B.r || A.c != B.c) fail(Err::Argument, "matrix difference shape mismatch");
  Mat C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
  return C;
}

Mat neg(const Ring& R, const Mat& A) {
  Mat C = A;
  for (auto& x : C.a) x = R.neg(x);
  return C;
}

Mat scale(const Ring& R, const Elem& s, const Mat& A) {
  Mat C = A;
  for (auto& x : C.a) x = R.mul(s, x);
  return C;
}

Mat transpose(const Mat& A) {
  Mat T;
  T.r = A.c;
  T.c = A.r;
  T.a.reserve(A.a.size());
  for (size_t j = 0; j < A.c; ++j)
    for (size_t i = 0; i < A.r; ++i) T.a.push_back(A(i, j));
  return T;
}

Mat hcat(const Ring& R, const std::vector<Mat>& parts, size_t rows) {
  size_t c = 0;
  for (const auto& P : parts) {
    if (P.r != rows) fail(Err::Argument, "hcat row mismatch");
    c += P.c;
  }
  Mat M = zeros(R, rows, c);
  size_t off = 0;
  for (const auto& P : parts) {
    set_block(M, 0, off, P);
    off += P.c;
  }
  return M;
}

Mat vcat(const Ring& R, const std::vector<Mat>& parts, size_t cols) {
  size_t r = 0;
  for (const auto& P : parts) {
    if (P.c != cols) fail(Err::Argument, "vcat column mismatch");
    r += P.r;
  }
  Mat M = zeros(R, r, cols);
  size_t off = 0;
  for (const auto& P : parts) {
    set_block(M, off, 0, P);
    off += P.r;
  }
  return M;
}

Mat block(const Mat& A, size_t r0, size_t c0, size_t nr, size_t nc) {
  if (r0 + nr > A.r || c0 + nc > A.c) fail(Err::Argument, "block out of range");
  Mat B;
  B.r = nr;
  B.c = nc;
  B.a.reserve(nr * nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) B.a.push_back(A(r0 + i, c0 + j));
  return B;
}

void set_block(Mat& A, size_t r0, size_t c0, const Mat& B) {
  if (r0 + B.r > A.r || c0 + B.c > A.c) fail(Err::Argument, "set_block out of range");
  for (size_t i = 0; i < B.r; ++i)
    for (size_t j = 0; j < B.c; ++j) A(r0 + i, c0 + j) = B(i, j);
}

Mat kron(const Ring& R, const Mat& A, const Mat& B) {
  Mat K = zeros(R, A.r * B.r, A.c * B.c);
  for (size_t i = 0; i < A.r; ++i)
    for (size_t j = 0; j < A.c; ++j) {
      const Elem& a = A(i, j);
      if (R.is_zero(a)) continue;
      for (size_t k = 0; k < B.r; ++k)
        for (size_t l = 0; l < B.c; ++l)
          if (!R.is_zero(B(k, l))) K(i * B.r + k, j * B.c + l) = R.mul(a, B(k, l));
    }
  return K;
}

Mat col(const Mat& A, size_t j) { return block(A, 0, j, A.r, 1); }

Mat cols(const Mat& A, const std::vector<size_t>& idx) {
  Mat B;
  B.r = A.r;
  B.c = idx.size();
  B.a.reserve(B.r * B.c);
  for (size_t i = 0; i < A.r; ++i)
    for (auto j : idx) B.a.push_back(A(i, j));
  return B;
}

Mat rows_of(const Mat& A, const std::vector<size_t>& idx) {
  Mat B;
  B.r = idx.size();
  B.c = A.c;
  B.a.reserve(B.r * B.c);
  for (auto i : idx)
    for (size_t j = 0; j < A.c; ++j) B.a.push_back(A(i, j));
  return B;
}

Mat vec(const Mat& A) {
  Mat v;
  v.r = A.r * A.c;
  v.c = 1;
  v.a.reserve(v.r);
  for (size_t j = 0; j < A.c; ++j)
    for (size_t i = 0; i < A.r; ++i) v.a.push_back(A(i, j));
  return v;
}

Mat unvec(const Mat& v, size_t r, size_t c) {
  if (v.r * v.c != r * c) fail(Err::Argument, "unvec size mismatch");
  Mat A;
  A.r = r;
  A.c = c;
  A.a.resize(r * c);
  for (size_t j = 0; j < c; ++j)
    for (size_t i = 0; i < r; ++i) A(i, j) = v.a[j * r + i];
  return A;
}

bool is_zero(const Ring& R, const Mat& A) {
  for (const auto& x : A.a)
    if (!R.is_zero(x)) return false;
  return true;
}

bool equal(const Ring& R, const Mat& A, const Mat& B) {
  if (A.r != B.r || A.c != B.c) return false;
  for (size_t i = 0; i < A.a.size(); ++i)
    if (!R.eq(A.a[i], B.a[i])) return false;
  return true;
}

Mat map_entries(const Ring&, const Mat& A, const std::function<Elem(const Elem&)>& f) {
  Mat B = A;
  for (auto& x : B.a) x = f(x);
  return B;
}

Mat diag_blocks(const Ring& R, const std::vector<Mat>& blocks) {
  size_t r = 0, c = 0;
  for (const auto& B : blocks) {
    r += B.r;
    c += B.c;
  }
  Mat M = zeros(R, r, c);
  size_t ro = 0, co = 0;
  for (const auto& B : blocks) {
    set_block(M, ro, co, B);
    ro += B.r;
    co += B.c;
  }
  return M;
}

// ---------------------------------------------------------------- prime field

namespace {

FpMat to_fp(const Mat& A, uint32_t p) {
  FpMat M(p, A.r, A.c);
  for (size_t i = 0; i < A.a.size(); ++i) M.a[i] = std::get<uint32_t>(A.a[i]);
  return M;
}

Mat from_fp(const FpMat& M) {
  Mat A;
  A.r = M.r;
  A.c = M.c;
  A.a.reserve(M.a.size());
  for (auto x : M.a) A.a.push_back(x);
  return A;
}

// ---------------------------------------------------------------- generic field

std::vector<size_t> field_rref(const Ring& R, Mat& M, size_t limit) {
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < limit && row < M.r; ++col) {
    size_t sel = M.r;
    for (size_t i = row; i < M.r; ++i)
      if (!R.is_zero(M(i, col))) {
        sel = i;
        break;
      }
    if (sel == M.r) continue;
    if (sel != row)
      for (size_t j = 0; j < M.c; ++j) std::swap(M(sel, j), M(row, j));
    Elem iv = R.inv(M(row, col));
    for (size_t j = col; j < M.c; ++j) M(row, j) = R.mul(M(row, j), iv);
    for (size_t i = 0; i < M.r; ++i) {
      if (i == row || R.is_zero(M(i, col))) continue;
      Elem f = M(i, col);
      for (size_t j = col; j < M.c; ++j)
        if (!R.is_zero(M(row, j))) M(i, j) = R.sub(M(i, j), R.mul(f, M(row, j)));
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

std::optional<Mat> field_solve(const Ring& R, const Mat& A, const Mat& B) {
  if (R.kind == Kind::PrimeField) {
    auto X = fp_solve(to_fp(A, R.p), to_fp(B, R.p));
    if (!X) return std::nullopt;
    return from_fp(*X);
  }
  Mat M = hcat(R, {A, B}, A.r);
  auto piv = field_rref(R, M, A.c);
  for (size_t i = piv.size(); i < M.r; ++i)
    for (size_t j = 0; j < B.c; ++j)
      if (!R.is_zero(M(i, A.c + j))) return std::nullopt;
  Mat X = zeros(R, A.c, B.c);
  for (size_t i = 0; i < piv.size(); ++i)
    for (size_t j = 0; j < B.c; ++j) X(piv[i], j) = M(i, A.c + j);
  return X;
}

Mat field_kernel(const Ring& R, const Mat& A) {
  if (R.kind == Kind::PrimeField) return from_fp(fp_kernel(to_fp(A, R.p)));
  Mat M = A;
  auto piv = field_rref(R, M, M.c);
  std::vector<char> is_piv(M.c, 0);
  for (auto c : piv) is_piv[c] = 1;
  std::vector<size_t> freec;
  for (size_t j = 0; j < M.c; ++j)
    if (!is_piv[j]) freec.push_back(j);
  Mat K = zeros(R, A.c, freec.size());
  for (size_t f = 0; f < freec.size(); ++f) {
    K(freec[f], f) = R.one();
    for (size_t i = 0; i < piv.size(); ++i) K(piv[i], f) = R.neg(M(i, freec[f]));
  }
  return K;
}

// Indices of a subset of columns of G spanning (im G + im W)/im W.
std::vector<size_t> field_select(const Ring& R, const Mat& G, const Mat& W) {
  Mat M = hcat(R, {W, G}, G.r);
  auto piv = field_rref(R, M, M.c);
  std::vector<size_t> out;
  for (auto c : piv)
    if (c >= W.c) out.push_back(c - W.c);
  return out;
}

// ---------------------------------------------------------------- local algebras

const QuotientAlgebra& qa(const Ring& R) { return static_cast<const QuotientAlgebra&>(R); }

std::vector<uint32_t> coords_col(const QuotientAlgebra& A, const Mat& M, size_t j) {
  std::vector<uint32_t> v(A.dim * M.r);
  for (size_t i = 0; i < M.r; ++i) {
    const auto& x = std::get<AVec>(M(i, j)).c;
    std::copy(x.begin(), x.end(), v.begin() + long(i * A.dim));
  }
  return v;
}

// Nakayama: subset of columns of G minimally generating (im G + im W)/im W.
std::vector<size_t> local_select(const QuotientAlgebra& A, const Mat& G, const Mat& W) {
  size_t n = A.dim * G.r;
  FpSpan S(A.p, n);
  if (W.c) {
    FpMat EW = expand_local(A, W);
    for (size_t j = 0; j < EW.c; ++j) {
      std::vector<uint32_t> v(n);
      for (size_t i = 0; i < n; ++i) v[i] = EW.at(i, j);
      S.add(std::move(v));
    }
  }
  std::vector<Elem> mgens;
  for (auto b : A.mbasis) mgens.push_back(A.basis_elem(b));
  for (size_t j = 0; j < G.c; ++j)
    for (const auto& m : mgens) {
      Mat c = col(G, j);
      for (auto& x : c.a) x = A.mul(m, x);
      S.add(coords_col(A, c, 0));
    }
  std::vector<size_t> out;
  for (size_t j = 0; j < G.c; ++j)
    if (S.add(coords_col(A, G, j))) out.push_back(j);
  return out;
}

std::optional<Mat> local_solve(const QuotientAlgebra& A, const Mat& M, const Mat& B) {
  auto X = fp_solve(expand_local(A, M), expand_vec(A, B));
  if (!X) return std::nullopt;
  return contract_vec(A, *X, M.c);
}

Mat local_kernel(const QuotientAlgebra& A, const Mat& M) {
  FpMat K = fp_kernel(expand_local(A, M));
  Mat G = contract_vec(A, K, M.c);
  return cols(G, local_select(A, G, zeros(A, M.c, 0)));
}

// ---------------------------------------------------------------- euclidean

struct Echelon {
  Mat E, V;
  std::vector<size_t> prow;  // pivot row of pivot column t
};

void col_axpy(const Ring& R, Mat& M, size_t dst, size_t src, const Elem& q) {
  // column dst -= q * column src
  for (size_t i = 0; i < M.r; ++i)
    if (!R.is_zero(M(i, src))) M(i, dst) = R.sub(M(i, dst), R.mul(q, M(i, src)));
}

void col_swap(Mat& M, size_t a, size_t b) {
  if (a == b) return;
  for (size_t i = 0; i < M.r; ++i) std::swap(M(i, a), M(i, b));
}

Echelon col_echelon(const Ring& R, const Mat& A) {
  Echelon e{A, eye(R, A.c), {}};
  size_t k = 0;
  for (size_t row = 0; row < A.r && k < A.c; ++row) {
    for (;;) {
      size_t best = A.c;
      for (size_t c = k; c < A.c; ++c)
        if (!R.is_zero(e.E(row, c)) && (best == A.c || R.norm_less(e.E(row, c), e.E(row, best)))) best = c;
      if (best == A.c) break;
      col_swap(e.E, best, k);
      col_swap(e.V, best, k);
      bool done = true;
      for (size_t c = k + 1; c < A.c; ++c) {
        if (R.is_zero(e.E(row, c))) continue;
        Elem q, r;
        R.divmod(e.E(row, c), e.E(row, k), q, r);
        col_axpy(R, e.E, c, k, q);
        col_axpy(R, e.V, c, k, q);
        if (!R.is_zero(r)) done = false;
      }
      if (done) {
        e.prow.push_back(row);
        ++k;
        break;
      }
    }
  }
  return e;
}

std::optional<Mat> euclid_solve(const Ring& R, const Mat& A, const Mat& B) {
  Echelon e = col_echelon(R, A);
  size_t k = e.prow.size();
  Mat Y = zeros(R, A.c, B.c);
  for (size_t j = 0; j < B.c; ++j) {
    Mat res = col(B, j);
    for (size_t t = 0; t < k; ++t) {
      const Elem& piv = e.E(e.prow[t], t);
      auto y = R.div(res(e.prow[t], 0), piv);
      if (!y) return std::nullopt;
      Y(t, j) = *y;
      if (R.is_zero(*y)) continue;
      for (size_t i = 0; i < A.r; ++i)
        if (!R.is_zero(e.E(i, t))) res(i, 0) = R.sub(res(i, 0), R.mul(e.E(i, t), *y));
    }
    if (!is_zero(R, res)) return std::nullopt;
  }
  return mul(R, e.V, Y);
}

Mat euclid_kernel(const Ring& R, const Mat& A) {
  Echelon e = col_echelon(R, A);
  size_t k = e.prow.size();
  std::vector<size_t> idx;
  for (size_t j = k; j < A.c; ++j) idx.push_back(j);
  return cols(e.V, idx);
}

// ---------------------------------------------------------------- polynomial rings

std::vector<MVec> poly_columns(const Mat& A) {
  std::vector<MVec> out(A.c, MVec(A.r));
  for (size_t j = 0; j < A.c; ++j)
    for (size_t i = 0; i < A.r; ++i) out[j][i] = std::get<MPoly>(A(i, j));
  return out;
}

// Groebner basis of the columns of [A; I].
std::vector<MVec> poly_stacked_gb(const PolyRing& P, const Mat& A) {
  Mat S = vcat(P, {A, eye(P, A.c)}, A.c);
  return groebner_module(P, poly_columns(S));
}

std::optional<Mat> poly_solve(const PolyRing& P, const Mat& A, const Mat& B) {
  auto G = poly_stacked_gb(P, A);
  Mat X = zeros(P, A.c, B.c);
  for (size_t j = 0; j < B.c; ++j) {
    MVec v(A.r + A.c);
    for (size_t i = 0; i < A.r; ++i) v[i] = std::get<MPoly>(B(i, j));
    v = top_reduce(P, v, G, A.r);
    if (lead_pos(v) < A.r) return std::nullopt;
    for (size_t i = 0; i < A.c; ++i) X(i, j) = P.neg(v[A.r + i]);
  }
  return X;
}

Mat poly_kernel(const PolyRing& P, const Mat& A) {
  auto G = poly_stacked_gb(P, A);
  std::vector<MVec> ker;
  for (auto& g : G)
    if (lead_pos(g) >= A.r) ker.push_back(g);
  Mat K = zeros(P, A.c, ker.size());
  for (size_t j = 0; j < ker.size(); ++j)
    for (size_t i = 0; i < A.c; ++i) K(i, j) = ker[j][A.r + i];
  return K;
}

std::vector<size_t> poly_select(const Ring& R, const Mat& G, const Mat& W) {
  std::vector<size_t> keep;
  for (size_t j = 0; j < G.c; ++j)
    if (!is_zero(R, col(G, j))) keep.push_back(j);
  for (size_t t = 0; t < keep.size();) {
    std::vector<size_t> others;
    for (size_t s = 0; s < keep.size(); ++s)
      if (s != t) others.push_back(keep[s]);
    Mat O = hcat(R, {cols(G, others), W}, G.r);
    if (solve(R, O, col(G, keep[t]))) {
      keep.erase(keep.begin() + long(t));
    } else {
      ++t;
    }
  }
  return keep;
}

}  // namespace

// ---------------------------------------------------------------- dispatch

FpMat expand_local(const QuotientAlgebra& A, const Mat& M) {
  size_t d = A.dim;
  FpMat E(A.p, d * M.r, d * M.c);
  for (size_t i = 0; i < M.r; ++i)
    for (size_t j = 0; j < M.c; ++j) {
      if (A.is_zero(M(i, j))) continue;
      auto L = A.mult_matrix(M(i, j));
      for (size_t a = 0; a < d; ++a)
        for (size_t b = 0; b < d; ++b) E.at(i * d + a, j * d + b) = L[a * d + b];
    }
  return E;
}

FpMat expand_vec(const QuotientAlgebra& A, const Mat& v) {
  FpMat E(A.p, A.dim * v.r, v.c);
  for (size_t j = 0; j < v.c; ++j) {
    auto c = coords_col(A, v, j);
    for (size_t i = 0; i < c.size(); ++i) E.at(i, j) = c[i];
  }
  return E;
}

Mat contract_vec(const QuotientAlgebra& A, const FpMat& x, size_t rows) {
  Mat M;
  M.r = rows;
  M.c = x.c;
  M.a.resize(rows * x.c);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < x.c; ++j) {
      AVec v{std::vector<uint32_t>(A.dim)};
      for (size_t k = 0; k < A.dim; ++k) v.c[k] = x.at(i * A.dim + k, j);
      M(i, j) = v;
    }
  return M;
}

size_t local_span_dim(const QuotientAlgebra& A, const Mat& M) { return fp_rank(expand_local(A, M)); }

std::optional<Mat> solve(const Ring& R, const Mat& A, const Mat& B) {
  if (A.r != B.r) fail(Err::Argument, "solve: row mismatch");
  if (B.c == 0 || A.r == 0) return zeros(R, A.c, B.c);
  if (A.c == 0) {
    if (is_zero(R, B)) return zeros(R, 0, B.c);
    return std::nullopt;
  }
  switch (R.backend) {
    case Backend::Field:
      return field_solve(R, A, B);
    case Backend::Local:
      return local_solve(qa(R), A, B);
    case Backend::Euclid:
      return euclid_solve(R, A, B);
    case Backend::Poly:
      return poly_solve(static_cast<const PolyRing&>(R), A, B);
  }
  return std::nullopt;
}

Mat kernel(const Ring& R, const Mat& A) {
  if (A.c == 0) return zeros(R, 0, 0);
  if (A.r == 0) return eye(R, A.c);
  switch (R.backend) {
    case Backend::Field:
      return field_kernel(R, A);
    case Backend::Local:
      return local_kernel(qa(R), A);
    case Backend::Euclid:
      return euclid_kernel(R, A);
    case Backend::Poly:
      return poly_kernel(static_cast<const PolyRing&>(R), A);
  }
  return {};
}

bool in_image(const Ring& R, const Mat& A, const Mat& B) { return solve(R, A, B).has_value(); }

Mat min_gens(const Ring& R, const Mat& G, const Mat& W) {
  if (G.c == 0) return G;
  switch (R.backend) {
    case Backend::Field:
      return cols(G, field_select(R, G, W));
    case Backend::Local:
      return cols(G, local_select(qa(R), G, W));
    case Backend::Poly:
      return cols(G, poly_select(R, G, W));
    case Backend::Euclid: {
      // relations of the subquotient, then Smith to pick the minimal generators
      Mat K = kernel(R, hcat(R, {G, W}, G.r));
      Mat Rel = block(K, 0, 0, G.c, K.c);
      SmithForm S = smith(R, Rel);
      std::vector<size_t> keep;
      for (size_t i = 0; i < G.c; ++i) {
        bool unit = i < S.D.c && i < S.D.r && R.is_unit(S.D(i, i));
        if (!unit) keep.push_back(i);
      }
      Mat gens = mul(R, G, cols(S.Uinv, keep));
      // generators that became zero modulo W are dropped
      std::vector<size_t> nz;
      for (size_t j = 0; j < gens.c; ++j)
        if (!in_image(R, W, col(gens, j))) nz.push_back(j);
      return cols(gens, nz);
    }
  }
  return G;
}

Mat reduce_top(const Ring& R, const Mat& K, size_t top) {
  if (K.c == 0) return K;
  Mat T = block(K, 0, 0, top, K.c);
  Mat empty = zeros(R, top, 0);
  switch (R.backend) {
    case Backend::Field:
      return cols(K, field_select(R, T, empty));
    case Backend::Local:
      return cols(K, local_select(qa(R), T, empty));
    case Backend::Poly:
      return cols(K, poly_select(R, T, empty));
    case Backend::Euclid: {
      Echelon e = col_echelon(R, T);
      std::vector<size_t> idx;
      for (size_t t = 0; t < e.prow.size(); ++t) idx.push_back(t);
      return cols(mul(R, K, e.V), idx);
    }
  }
  return K;
}

// ---------------------------------------------------------------- Smith form

SmithForm smith(const Ring& R, const Mat& A) {
  if (R.backend != Backend::Euclid && R.backend != Backend::Field)
    fail(Err::Unsupported, "Smith form needs a euclidean ring, got " + R.name());
  size_t m = A.r, n = A.c;
  SmithForm S{A, eye(R, m), eye(R, m), eye(R, n), {}};
  Mat& D = S.D;
  auto row_axpy = [&](size_t dst, size_t src, const Elem& q) {
    // row dst -= q row src, tracked in U and U^{-1}
    for (size_t j = 0; j < n; ++j)
      if (!R.is_zero(D(src, j))) D(dst, j) = R.sub(D(dst, j), R.mul(q, D(src, j)));
    for (size_t j = 0; j < m; ++j)
      if (!R.is_zero(S.U(src, j))) S.U(dst, j) = R.sub(S.U(dst, j), R.mul(q, S.U(src, j)));
    for (size_t i = 0; i < m; ++i)
      if (!R.is_zero(S.Uinv(i, dst))) S.Uinv(i, src) = R.add(S.Uinv(i, src), R.mul(q, S.Uinv(i, dst)));
  };
  auto row_swap = [&](size_t a, size_t b) {
    if (a == b) return;
    for (size_t j = 0; j < n; ++j) std::swap(D(a, j), D(b, j));
    for (size_t j = 0; j < m; ++j) std::swap(S.U(a, j), S.U(b, j));
    col_swap(S.Uinv, a, b);
  };
  auto cswap = [&](size_t a, size_t b) {
    col_swap(D, a, b);
    col_swap(S.V, a, b);
  };
  auto caxpy = [&](size_t dst, size_t src, const Elem& q) {
    col_axpy(R, D, dst, src, q);
    col_axpy(R, S.V, dst, src, q);
  };
  auto less = [&](const Elem& a, const Elem& b) {
    if (R.backend == Backend::Field) return false;
    return R.norm_less(a, b);
  };
  for (size_t t = 0; t < std::min(m, n); ++t) {
    // smallest entry of the trailing block, ties row-major
    size_t bi = m, bj = n;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j)
        if (!R.is_zero(D(i, j)) && (bi == m || less(D(i, j), D(bi, bj)))) {
          bi = i;
          bj = j;
        }
    if (bi == m) break;
    row_swap(t, bi);
    cswap(t, bj);
    for (;;) {
      bool clean = true;
      for (size_t i = t + 1; i < m; ++i) {
        if (R.is_zero(D(i, t))) continue;
        Elem q, r;
        if (R.backend == Backend::Field) {
          q = R.mul(D(i, t), R.inv(D(t, t)));
          r = R.zero();
        } else {
          R.divmod(D(i, t), D(t, t), q, r);
        }
        row_axpy(i, t, q);
        if (!R.is_zero(r)) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (R.is_zero(D(t, j))) continue;
        Elem q, r;
        if (R.backend == Backend::Field) {
          q = R.mul(D(t, j), R.inv(D(t, t)));
          r = R.zero();
        } else {
          R.divmod(D(t, j), D(t, t), q, r);
        }
        caxpy(j, t, q);
        if (!R.is_zero(r)) clean = false;
      }
      if (!clean) {
        // move the smallest remaining entry of row/column t into the pivot
        size_t si = t, sj = t;
        for (size_t i = t + 1; i < m; ++i)
          if (!R.is_zero(D(i, t)) && less(D(i, t), D(si, sj))) {
            si = i;
            sj = t;
          }
        for (size_t j = t + 1; j < n; ++j)
          if (!R.is_zero(D(t, j)) && less(D(t, j), D(si, sj))) {
            si = t;
            sj = j;
          }
        row_swap(t, si);
        cswap(t, sj);
        continue;
      }
      // divisibility of the trailing block
      size_t bad = m;
      for (size_t i = t + 1; i < m && bad == m; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (!R.is_zero(D(i, j)) && !R.div(D(i, j), D(t, t))) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_axpy(t, bad, R.neg(R.one()));  // row t += row bad
    }
    Elem u = R.unit_normal(D(t, t));
    if (!R.eq(u, R.one())) {
      for (size_t j = 0; j < n; ++j) D(t, j) = R.mul(u, D(t, j));
      for (size_t j = 0; j < m; ++j) S.U(t, j) = R.mul(u, S.U(t, j));
      Elem ui = R.inv(u);
      for (size_t i = 0; i < m; ++i) S.Uinv(i, t) = R.mul(S.Uinv(i, t), ui);
    }
    S.diag.push_back(D(t, t));
  }
  return S;
}

// ---------------------------------------------------------------- text and json

std::string mat_str(const Ring& R, const Mat& A) {
  std::string s = "[";
  for (size_t i = 0; i < A.r; ++i) {
    s += i ? "; " : "";
    for (size_t j = 0; j < A.c; ++j) s += (j ? " " : "") + R.str(A(i, j));
  }
  return s + "]";
}

json mat_json(const Ring& R, const Mat& A) {
  json rows = json::array();
  for (size_t i = 0; i < A.r; ++i) {
    json row = json::array();
    for (size_t j = 0; j < A.c; ++j) row.push_back(R.str(A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const Ring& R, const json& j, size_t rows, size_t cols_) {
  Mat M = zeros(R, rows, cols_);
  if (j.is_null()) return M;
  if (!j.is_array()) fail(Err::Validation, "matrix must be an array of rows");
  if (rows == 0 || (cols_ == 0 && j.empty())) return M;
  if (j.size() != rows) fail(Err::Validation, "matrix has " + std::to_string(j.size()) + " rows, expected " +
                                                  std::to_string(rows));
  for (size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols_)
      fail(Err::Validation, "matrix row " + std::to_string(i) + " has wrong length, expected " +
                                std::to_string(cols_));
    for (size_t c = 0; c < cols_; ++c) {
      const auto& x = row[c];
      if (x.is_string()) {
        M(i, c) = R.parse(x.get<std::string>());
      } else if (x.is_number_integer()) {
        M(i, c) = R.from_int(mpz_class(std::to_string(x.get<int64_t>())));
      } else {
        fail(Err::Validation, "matrix entries must be strings or integers");
      }
    }
  }
  return M;
}

}  // namespace stabcx
