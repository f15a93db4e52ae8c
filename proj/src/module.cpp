#include "module.hpp"

#include "fp.hpp"

namespace stabcx {

namespace {

const QuotientAlgebra& qa(const Ring& R) { return static_cast<const QuotientAlgebra&>(R); }

// Drop zero columns and, where the backend allows it, redundant relations.
Mat minimal_relations(const Ring& R, const Mat& rel) {
  if (R.backend == Backend::Euclid) {
    std::vector<size_t> nz;
    for (size_t j = 0; j < rel.c; ++j)
      if (!is_zero(R, col(rel, j))) nz.push_back(j);
    return cols(rel, nz);
  }
  return min_gens(R, rel, zeros(R, rel.r, 0));
}

// One unit-pivot elimination step; returns false when no entry is a unit.
bool eliminate_unit(const Ring& R, Mat& rel, Mat& fwd, Mat& back) {
  size_t n = rel.r;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < rel.c; ++j) {
      if (!R.is_unit(rel(i, j))) continue;
      Elem ui = R.inv(rel(i, j));
      // generator i equals -u^{-1} sum_{k != i} rel(k,j) e_k in the module
      Mat r2 = rel;
      for (size_t jj = 0; jj < rel.c; ++jj) {
        if (jj == j || R.is_zero(rel(i, jj))) continue;
        Elem q = R.mul(rel(i, jj), ui);
        for (size_t k = 0; k < n; ++k) r2(k, jj) = R.sub(r2(k, jj), R.mul(q, rel(k, j)));
      }
      std::vector<size_t> keep_r, keep_c;
      for (size_t k = 0; k < n; ++k)
        if (k != i) keep_r.push_back(k);
      for (size_t jj = 0; jj < rel.c; ++jj)
        if (jj != j) keep_c.push_back(jj);
      Mat step = zeros(R, n - 1, n);  // old coordinates -> new
      for (size_t t = 0; t < keep_r.size(); ++t) {
        step(t, keep_r[t]) = R.one();
        step(t, i) = R.neg(R.mul(ui, rel(keep_r[t], j)));
      }
      fwd = mul(R, step, fwd);
      back = cols(back, keep_r);
      rel = cols(rows_of(r2, keep_r), keep_c);
      return true;
    }
  return false;
}

}  // namespace

PresentedModule free_module(RingP R, size_t n) {
  PresentedModule M{R, n, zeros(*R, n, 0)};
  return M;
}

PresentedModule coker_raw(RingP R, const Mat& A) { return PresentedModule{R, A.r, A}; }

PresentedModule cokernel_presentation(RingP R, const Mat& A) { return prune(coker_raw(std::move(R), A)); }

PresentedModule prune(const PresentedModule& M, Mat* fwd, Mat* back) {
  const Ring& R = *M.R;
  if (R.backend == Backend::Euclid) {
    SmithForm S = smith(R, M.rel);
    std::vector<size_t> keep;
    std::vector<Elem> factors;
    for (size_t i = 0; i < M.n; ++i) {
      if (i < S.diag.size()) {
        if (R.is_unit(S.diag[i])) continue;
        factors.push_back(S.diag[i]);
      }
      keep.push_back(i);
    }
    PresentedModule out{M.R, keep.size(), zeros(R, keep.size(), factors.size())};
    for (size_t t = 0; t < factors.size(); ++t) out.rel(t, t) = factors[t];
    if (fwd) *fwd = rows_of(S.U, keep);
    if (back) *back = cols(S.Uinv, keep);
    return out;
  }
  Mat rel = M.rel, F = eye(R, M.n), B = eye(R, M.n);
  while (eliminate_unit(R, rel, F, B)) {
  }
  PresentedModule out{M.R, rel.r, minimal_relations(R, rel)};
  if (fwd) *fwd = F;
  if (back) *back = B;
  return out;
}

PresentedModule subquotient(RingP R, const Mat& G, const Mat& W, Mat* gens) {
  const Ring& r = *R;
  Mat G2 = min_gens(r, G, W);
  Mat K = kernel(r, hcat(r, {G2, W}, G.r));
  PresentedModule raw{R, G2.c, block(K, 0, 0, G2.c, K.c)};
  Mat back;
  PresentedModule out = prune(raw, nullptr, &back);
  if (gens) *gens = mul(r, G2, back);
  return out;
}

bool is_zero_module(const PresentedModule& M) {
  if (M.n == 0) return true;
  return in_image(*M.R, M.rel, eye(*M.R, M.n));
}

bool map_well_defined(const ModuleMap& f) {
  const Ring& R = *f.src.R;
  if (f.f.r != f.dst.n || f.f.c != f.src.n) return false;
  return in_image(R, f.dst.rel, mul(R, f.f, f.src.rel));
}

PresentedModule map_kernel(const ModuleMap& f, Mat* gens) {
  const Ring& R = *f.src.R;
  Mat K = kernel(R, hcat(R, {f.f, f.dst.rel}, f.dst.n));
  Mat Z = block(K, 0, 0, f.src.n, K.c);
  return subquotient(f.src.R, Z, f.src.rel, gens);
}

bool map_is_injective(const ModuleMap& f) {
  const Ring& R = *f.src.R;
  Mat K = kernel(R, hcat(R, {f.f, f.dst.rel}, f.dst.n));
  return in_image(R, f.src.rel, block(K, 0, 0, f.src.n, K.c));
}

bool map_is_surjective(const ModuleMap& f) {
  const Ring& R = *f.src.R;
  return in_image(R, hcat(R, {f.f, f.dst.rel}, f.dst.n), eye(R, f.dst.n));
}

PresentedModule map_cokernel(const ModuleMap& f) {
  const Ring& R = *f.src.R;
  return cokernel_presentation(f.src.R, hcat(R, {f.f, f.dst.rel}, f.dst.n));
}

json invariants(const PresentedModule& M) {
  const Ring& R = *M.R;
  switch (R.backend) {
    case Backend::Field: {
      size_t rank = M.rel.c - kernel(R, M.rel).c;
      if (M.rel.c == 0) rank = 0;
      return {{"dim", M.n - rank}};
    }
    case Backend::Euclid: {
      SmithForm S = smith(R, M.rel);
      json f = json::array();
      for (const auto& d : S.diag)
        if (!R.is_unit(d)) f.push_back(R.str(d));
      return {{"factors", f}, {"free", M.n - S.diag.size()}};
    }
    case Backend::Local: {
      const auto& A = qa(R);
      size_t N = A.dim * M.n;
      FpSpan base(A.p, N);
      FpMat E = expand_local(A, M.rel);
      for (size_t j = 0; j < E.c; ++j) {
        std::vector<uint32_t> v(N);
        for (size_t i = 0; i < N; ++i) v[i] = E.at(i, j);
        base.add(std::move(v));
      }
      size_t r0 = base.dim();
      json dims = json::array();
      dims.push_back(N - r0);
      // spanning sets of m^j
      std::vector<Elem> power;
      for (auto b : A.mbasis) power.push_back(A.basis_elem(b));
      while (!power.empty()) {
        FpSpan S = base;
        for (const auto& s : power)
          for (size_t i = 0; i < M.n; ++i) {
            std::vector<uint32_t> v(N, 0);
            const auto& c = std::get<AVec>(s).c;
            std::copy(c.begin(), c.end(), v.begin() + long(i * A.dim));
            S.add(std::move(v));
          }
        size_t d = S.dim() - r0;
        if (d == 0) break;
        dims.push_back(d);
        FpSpan ideal(A.p, A.dim);
        std::vector<Elem> next;
        for (const auto& s : power)
          for (auto b : A.mbasis) {
            Elem e = A.mul(s, A.basis_elem(b));
            if (ideal.add(std::get<AVec>(e).c)) next.push_back(e);
          }
        power = std::move(next);
      }
      return {{"dims", dims}};
    }
    case Backend::Poly:
      return {{"zero", is_zero_module(M)}};
  }
  return {};
}

bool same_invariants(const PresentedModule& A, const PresentedModule& B) { return invariants(A) == invariants(B); }

std::string module_str(const PresentedModule& M) {
  return "coker " + mat_str(*M.R, M.rel) + " on " + std::to_string(M.n) + " generators";
}

json module_json(const PresentedModule& M) {
  return {{"ring", M.R->to_json()}, {"gens", M.n}, {"relations", mat_json(*M.R, transpose(M.rel))},
          {"invariants", invariants(M)}};
}

PresentedModule module_from_json(const json& j) {
  if (!j.contains("ring")) fail(Err::Validation, "module fixture needs a ring");
  RingP R = ring_from_json(j.at("ring"));
  size_t n = j.value("gens", size_t(0));
  const json rels = j.value("relations", json::array());
  // relations are listed one per row; each becomes a column of the presentation
  Mat T = mat_from_json(*R, rels, rels.size(), n);
  return PresentedModule{R, n, transpose(T)};
}

FreeResolution free_resolution(const PresentedModule& M, size_t length) {
  const Ring& R = *M.R;
  PresentedModule P = prune(M);
  FreeResolution F{M.R, {P.n}, {}};
  if (length == 0) return F;
  Mat d = P.rel;
  F.maps.push_back(d);
  F.ranks.push_back(d.c);
  while (F.maps.size() < length) {
    Mat K = kernel(R, d);
    d = K.c ? min_gens(R, K, zeros(R, K.r, 0)) : K;
    F.maps.push_back(d);
    F.ranks.push_back(d.c);
  }
  return F;
}

bool resolution_exact(const FreeResolution& F) {
  const Ring& R = *F.R;
  for (size_t k = 0; k + 1 < F.maps.size(); ++k) {
    if (!is_zero(R, mul(R, F.maps[k], F.maps[k + 1]))) return false;
    if (!in_image(R, F.maps[k + 1], kernel(R, F.maps[k]))) return false;
  }
  return true;
}

PresentedModule dual_module(const PresentedModule& M, Mat* gens) {
  const Ring& R = *M.R;
  Mat K = M.rel.c ? kernel(R, transpose(M.rel)) : eye(R, M.n);
  return subquotient(M.R, K, zeros(R, M.n, 0), gens);
}

ModuleMap biduality_map(const PresentedModule& M) {
  const Ring& R = *M.R;
  Mat K1, K2;
  PresentedModule D1 = dual_module(M, &K1);
  PresentedModule D2 = dual_module(D1, &K2);
  // ev(e_i) is the functional phi_j -> phi_j(e_i), i.e. row i of K1
  auto y = solve(R, K2, transpose(K1));
  if (!y) fail(Err::Validation, "biduality map does not land in M**");
  return ModuleMap{M, D2, *y};
}

PresentedModule transpose(const PresentedModule& M) {
  PresentedModule P = prune(M);
  return cokernel_presentation(M.R, transpose(P.rel));
}

PresentedModule hom_module(const PresentedModule& M, const PresentedModule& N, Mat* gens) {
  const Ring& R = *M.R;
  size_t n = M.n, p = N.n, a = M.rel.c;
  Mat big = hcat(R, {kron(R, transpose(M.rel), eye(R, p)), neg(R, kron(R, eye(R, a), N.rel))}, a * p);
  Mat K = kernel(R, big);
  Mat G = block(K, 0, 0, n * p, K.c);
  return subquotient(M.R, G, kron(R, eye(R, n), N.rel), gens);
}

PresentedModule cohomology_presented(RingP Rp, const Mat& Din, const Mat& Dout, const Mat& Bmid, const Mat& Bout,
                                     Mat* gens) {
  const Ring& R = *Rp;
  size_t m = Dout.c;
  Mat K = kernel(R, hcat(R, {Dout, Bout}, Dout.r));
  Mat Z = block(K, 0, 0, m, K.c);
  return subquotient(Rp, Z, hcat(R, {Din, Bmid}, m), gens);
}

PresentedModule ext_from(const FreeResolution& F, const PresentedModule& N, size_t i) {
  const Ring& R = *F.R;
  if (F.maps.size() < i + 1) fail(Err::Argument, "resolution too short for Ext");
  size_t p = N.n;
  size_t ni = F.ranks[i], nn = F.ranks[i + 1];
  Mat Dout = kron(R, transpose(F.maps[i]), eye(R, p));
  Mat Din = i ? kron(R, transpose(F.maps[i - 1]), eye(R, p)) : zeros(R, p * ni, 0);
  return cohomology_presented(F.R, Din, Dout, kron(R, eye(R, ni), N.rel), kron(R, eye(R, nn), N.rel));
}

PresentedModule tor_from(const FreeResolution& F, const PresentedModule& N, size_t i) {
  const Ring& R = *F.R;
  if (F.maps.size() < i + 1) fail(Err::Argument, "resolution too short for Tor");
  size_t p = N.n;
  size_t ni = F.ranks[i];
  Mat Din = kron(R, F.maps[i], eye(R, p));
  Mat Dout = i ? kron(R, F.maps[i - 1], eye(R, p)) : zeros(R, 0, p * ni);
  Mat Bout = i ? kron(R, eye(R, F.ranks[i - 1]), N.rel) : zeros(R, 0, 0);
  return cohomology_presented(F.R, Din, Dout, kron(R, eye(R, ni), N.rel), Bout);
}

PresentedModule ext(const PresentedModule& M, const PresentedModule& N, size_t i) {
  return ext_from(free_resolution(M, i + 1), N, i);
}

PresentedModule tor(const PresentedModule& M, const PresentedModule& N, size_t i) {
  return tor_from(free_resolution(M, i + 1), N, i);
}

bool is_projective(const PresentedModule& M) {
  const Ring& R = *M.R;
  if (R.backend == Backend::Poly) fail(Err::Unsupported, "projectivity test over polynomial rings");
  return prune(M).rel.c == 0;
}

PresentedModule torsion_submodule(const PresentedModule& M) {
  const Ring& R = *M.R;
  if (R.backend == Backend::Euclid) {
    PresentedModule P = prune(M);
    size_t t = P.rel.c;
    return PresentedModule{M.R, t, block(P.rel, 0, 0, t, t)};
  }
  if (R.backend == Backend::Field || R.backend == Backend::Local) return free_module(M.R, 0);
  fail(Err::Unsupported, "torsion submodule over " + R.name());
}

bool is_torsionless(const PresentedModule& M) {
  PresentedModule one = free_module(M.R, 1);
  return is_zero_module(ext(transpose(M), one, 1));
}

bool is_reflexive(const PresentedModule& M) {
  ModuleMap ev = biduality_map(M);
  return map_is_injective(ev) && map_is_surjective(ev);
}

ABReport auslander_bridger(const PresentedModule& M) {
  PresentedModule P = prune(M);
  PresentedModule one = free_module(M.R, 1);
  ModuleMap ev = biduality_map(P);
  PresentedModule T = transpose(P);
  FreeResolution F = free_resolution(T, 3);
  ABReport r;
  r.ext1 = ext_from(F, one, 1);
  r.ext2 = ext_from(F, one, 2);
  r.ker = map_kernel(ev);
  r.coker = map_cokernel(ev);
  r.ker_matches = same_invariants(r.ker, r.ext1);
  r.coker_matches = same_invariants(r.coker, r.ext2);
  return r;
}

}  // namespace stabcx
