#pragma once

// Dense linear algebra over a prime field with word-sized entries.

#include <cstdint>
#include <optional>
#include <vector>

namespace stabcx {

struct FpMat {
  uint32_t p = 2;
  size_t r = 0, c = 0;
  std::vector<uint32_t> a;
  FpMat() = default;
  FpMat(uint32_t p_, size_t r_, size_t c_) : p(p_), r(r_), c(c_), a(r_ * c_, 0) {}
  uint32_t& at(size_t i, size_t j) { return a[i * c + j]; }
  uint32_t at(size_t i, size_t j) const { return a[i * c + j]; }
};

// Reduced row echelon form on the first `limit` columns; returns pivot columns.
std::vector<size_t> fp_rref(FpMat& m, size_t limit);
size_t fp_rank(FpMat m);
// Basis of the nullspace, one column per free variable.
FpMat fp_kernel(const FpMat& A);
// Solve A X = B column by column; nullopt if some column is inconsistent.
// Free variables are set to zero.
std::optional<FpMat> fp_solve(const FpMat& A, const FpMat& B);

// Incremental span membership used by greedy generator selection.
class FpSpan {
 public:
  FpSpan(uint32_t p, size_t n) : p_(p), n_(n) {}
  // Reduces v against the current echelon rows; true if v was independent (then it is added).
  bool add(std::vector<uint32_t> v);
  bool contains(std::vector<uint32_t> v) const;
  size_t dim() const { return rows_.size(); }

 private:
  void reduce(std::vector<uint32_t>& v) const;
  uint32_t p_;
  size_t n_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<size_t> piv_;
};

}  // namespace stabcx
