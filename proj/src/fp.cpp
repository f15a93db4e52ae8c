#include "fp.hpp"

#include "ring.hpp"

namespace stabcx {

std::vector<size_t> fp_rref(FpMat& m, size_t limit) {
  const uint64_t p = m.p;
  std::vector<size_t> piv;
  size_t row = 0;
  for (size_t col = 0; col < limit && row < m.r; ++col) {
    size_t sel = m.r;
    for (size_t i = row; i < m.r; ++i)
      if (m.at(i, col)) {
        sel = i;
        break;
      }
    if (sel == m.r) continue;
    if (sel != row)
      for (size_t j = 0; j < m.c; ++j) std::swap(m.at(sel, j), m.at(row, j));
    uint64_t iv = inv_mod(m.at(row, col), m.p);
    uint32_t* pr = &m.a[row * m.c];
    for (size_t j = col; j < m.c; ++j) pr[j] = uint32_t(pr[j] * iv % p);
    for (size_t i = 0; i < m.r; ++i) {
      if (i == row) continue;
      uint32_t* q = &m.a[i * m.c];
      uint64_t f = q[col];
      if (!f) continue;
      f = p - f;
      for (size_t j = col; j < m.c; ++j)
        if (pr[j]) q[j] = uint32_t((q[j] + f * pr[j]) % p);
    }
    piv.push_back(col);
    ++row;
  }
  return piv;
}

size_t fp_rank(FpMat m) { return fp_rref(m, m.c).size(); }

FpMat fp_kernel(const FpMat& A) {
  FpMat m = A;
  auto piv = fp_rref(m, m.c);
  std::vector<char> is_piv(m.c, 0);
  for (auto c : piv) is_piv[c] = 1;
  std::vector<size_t> freec;
  for (size_t j = 0; j < m.c; ++j)
    if (!is_piv[j]) freec.push_back(j);
  FpMat K(A.p, A.c, freec.size());
  for (size_t f = 0; f < freec.size(); ++f) {
    size_t fc = freec[f];
    K.at(fc, f) = 1;
    for (size_t i = 0; i < piv.size(); ++i) {
      uint32_t v = m.at(i, fc);
      if (v) K.at(piv[i], f) = A.p - v;
    }
  }
  return K;
}

std::optional<FpMat> fp_solve(const FpMat& A, const FpMat& B) {
  FpMat m(A.p, A.r, A.c + B.c);
  for (size_t i = 0; i < A.r; ++i) {
    for (size_t j = 0; j < A.c; ++j) m.at(i, j) = A.at(i, j);
    for (size_t j = 0; j < B.c; ++j) m.at(i, A.c + j) = B.at(i, j);
  }
  auto piv = fp_rref(m, A.c);
  for (size_t i = piv.size(); i < m.r; ++i)
    for (size_t j = 0; j < B.c; ++j)
      if (m.at(i, A.c + j)) return std::nullopt;
  FpMat X(A.p, A.c, B.c);
  for (size_t i = 0; i < piv.size(); ++i)
    for (size_t j = 0; j < B.c; ++j) X.at(piv[i], j) = m.at(i, A.c + j);
  return X;
}

void FpSpan::reduce(std::vector<uint32_t>& v) const {
  const uint64_t p = p_;
  for (size_t r = 0; r < rows_.size(); ++r) {
    uint64_t f = v[piv_[r]];
    if (!f) continue;
    f = p - f;
    const auto& row = rows_[r];
    for (size_t j = piv_[r]; j < n_; ++j)
      if (row[j]) v[j] = uint32_t((v[j] + f * row[j]) % p);
  }
}

bool FpSpan::contains(std::vector<uint32_t> v) const {
  reduce(v);
  for (auto x : v)
    if (x) return false;
  return true;
}

bool FpSpan::add(std::vector<uint32_t> v) {
  reduce(v);
  size_t pc = n_;
  for (size_t j = 0; j < n_; ++j)
    if (v[j]) {
      pc = j;
      break;
    }
  if (pc == n_) return false;
  uint64_t iv = inv_mod(v[pc], p_);
  for (size_t j = pc; j < n_; ++j) v[j] = uint32_t(v[j] * iv % p_);
  // keep rows fully reduced against the new pivot
  for (auto& row : rows_) {
    uint64_t f = row[pc];
    if (!f) continue;
    f = p_ - f;
    for (size_t j = pc; j < n_; ++j)
      if (v[j]) row[j] = uint32_t((row[j] + f * v[j]) % p_);
  }
  rows_.push_back(std::move(v));
  piv_.push_back(pc);
  return true;
}

}  // namespace stabcx
