#include "complex.hpp"

#include <map>
#include <numeric>
#include <tuple>

namespace stabcx {

// ---------------------------------------------------------------- layouts

long Layout::index(int k) const {
  if (lo > hi) return -1;
  if (k >= lo && k <= hi) return k - lo;
  if (k > hi) {
    if (!rp) return -1;
    int base = hi - rp + 1;
    return long(base + (k - base) % rp - lo);
  }
  if (!lp) return -1;
  return long(((k - lo) % lp + lp) % lp);
}

Layout layout_shift(const Layout& L, int off) { return Layout{L.lo - off, L.hi - off, L.lp, L.rp}; }

Layout layout_union(const std::vector<Layout>& Ls) {
  Layout U;
  bool any = false;
  for (const auto& L : Ls) {
    if (L.lo > L.hi) continue;
    if (!any) {
      U = L;
      any = true;
      continue;
    }
    U.lo = std::min(U.lo, L.lo);
    U.hi = std::max(U.hi, L.hi);
    if (L.lp) U.lp = U.lp ? std::lcm(U.lp, L.lp) : L.lp;
    if (L.rp) U.rp = U.rp ? std::lcm(U.rp, L.rp) : L.rp;
  }
  return U;
}

json layout_json(const Layout& L) { return {{"lo", L.lo}, {"hi", L.hi}, {"left_period", L.lp}, {"right_period", L.rp}}; }

namespace {

std::pair<int, int> check_range(const std::vector<Layout>& Ls) {
  Layout U = layout_union(Ls);
  if (U.lo > U.hi) return {0, -1};
  return {U.lo - U.lp - 1, U.hi + U.rp + 1};
}

// Widen a layout so the window holds a margin plus a full period on each tailed side.
Layout widen(Layout L, int step) {
  if (L.lo > L.hi) return L;
  L.lo -= L.lp ? L.lp * step + 1 : 1;
  L.hi += L.rp ? L.rp * step + 1 : 1;
  int need = std::max(L.lp, L.rp);
  if (L.hi - L.lo + 1 < need) L.hi = L.lo + need - 1;
  return L;
}

bool periodic_ok(const Ring& R, const Layout& L, const std::vector<size_t>* rk, const std::vector<Mat>& v,
                 const std::function<size_t(int)>* rank, const std::function<Mat(int)>& f) {
  auto same = [&](int k) {
    long i = L.index(k);
    if (rk && (*rank)(k) != (*rk)[size_t(i)]) return false;
    return equal(R, f(k), v[size_t(i)]);
  };
  for (int k = L.hi + 1; L.rp && k <= L.hi + L.rp; ++k)
    if (!same(k)) return false;
  for (int k = L.lo - L.lp; L.lp && k < L.lo; ++k)
    if (!same(k)) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- builders

Complex make_complex(RingP R, Layout L0, const std::function<size_t(int)>& rank, const std::function<Mat(int)>& d) {
  const Ring& r = *R;
  if (L0.lo > L0.hi) return zero_complex(R);
  for (int step = 1; step <= 4; ++step) {
    Layout L = widen(L0, step);
    Complex X{R, L, {}, {}};
    for (int k = L.lo; k <= L.hi; ++k) {
      X.rk.push_back(rank(k));
      Mat m = d(k);
      if (m.c != X.rk.back() || m.r != rank(k + 1)) fail(Err::Validation, "differential shape mismatch at degree " + std::to_string(k));
      X.dv.push_back(std::move(m));
    }
    if (!L.bounded() && !periodic_ok(r, L, &X.rk, X.dv, &rank, d)) continue;
    // trim zero degrees at bounded ends
    int need = std::max(L.lp, L.rp);
    while (!L.lp && X.L.lo <= X.L.hi && X.rk.front() == 0 && X.L.hi - X.L.lo + 1 > need) {
      X.rk.erase(X.rk.begin());
      X.dv.erase(X.dv.begin());
      ++X.L.lo;
    }
    while (!L.rp && X.L.lo <= X.L.hi && X.rk.back() == 0 && X.L.hi - X.L.lo + 1 > need) {
      X.rk.pop_back();
      X.dv.pop_back();
      --X.L.hi;
      if (!X.dv.empty()) X.dv.back() = zeros(r, 0, X.rk.back());
    }
    if (X.L.lo > X.L.hi || (X.rk.size() == 1 && X.rk[0] == 0 && L.bounded())) return zero_complex(R);
    return X;
  }
  fail(Err::Validation, "construction is not periodic with the expected period");
}

MatSeq make_seq(const Ring& R, Layout L0, const std::function<Mat(int)>& f) {
  if (L0.lo > L0.hi) return MatSeq{};
  for (int step = 1; step <= 4; ++step) {
    Layout L = widen(L0, step);
    MatSeq S{L, {}};
    for (int k = L.lo; k <= L.hi; ++k) S.v.push_back(f(k));
    if (!L.bounded() && !periodic_ok(R, L, nullptr, S.v, nullptr, f)) continue;
    return S;
  }
  fail(Err::Validation, "map is not periodic with the expected period");
}

ChainMap make_map(const Complex& X, const Complex& Y, const std::vector<Layout>& extra,
                  const std::function<Mat(int)>& f) {
  std::vector<Layout> Ls = extra;
  Ls.push_back(X.L);
  Ls.push_back(Y.L);
  Layout L = layout_union(Ls);
  ChainMap m{X, Y, make_seq(*X.R, L, [&](int k) {
               Mat a = f(k);
               if (a.r != Y.rank(k) || a.c != X.rank(k)) fail(Err::Validation, "chain map shape mismatch at degree " + std::to_string(k));
               return a;
             })};
  return m;
}

Mat Complex::d(int k) const {
  long i = L.index(k);
  if (i >= 0) return dv[size_t(i)];
  return zeros(*R, rank(k + 1), rank(k));
}

Mat ChainMap::at(int k) const {
  if (auto m = f.find(k)) return *m;
  return zeros(*X.R, Y.rank(k), X.rank(k));
}

Mat Homotopy::at(const Complex& X, const Complex& Y, int k) const {
  if (auto m = h.find(k)) return *m;
  return zeros(*X.R, Y.rank(k - 1), X.rank(k));
}

Complex zero_complex(RingP R) { return Complex{R, Layout{}, {}, {}}; }

Complex bounded_complex(RingP R, int lo, const std::vector<size_t>& ranks, const std::vector<Mat>& ds) {
  int hi = lo + int(ranks.size()) - 1;
  auto rank = [&](int k) { return (k >= lo && k <= hi) ? ranks[size_t(k - lo)] : size_t(0); };
  return make_complex(R, Layout{lo, hi, 0, 0}, rank, [&](int k) {
    size_t j = size_t(k - lo);
    if (k >= lo && j < ds.size()) return ds[j];
    return zeros(*R, rank(k + 1), rank(k));
  });
}

Complex free_in_degree(RingP R, size_t n, int k) { return bounded_complex(R, k, {n}, {}); }

bool valid_complex(const Complex& X) {
  const Ring& R = *X.R;
  auto [a, b] = check_range({X.L});
  for (int k = a; k <= b; ++k) {
    Mat dk = X.d(k);
    if (dk.r != X.rank(k + 1) || dk.c != X.rank(k)) return false;
    if (!is_zero(R, mul(R, X.d(k + 1), dk))) return false;
  }
  return true;
}

bool equal_complex(const Complex& X, const Complex& Y) {
  const Ring& R = *X.R;
  auto [a, b] = check_range({X.L, Y.L});
  for (int k = a; k <= b; ++k)
    if (X.rank(k) != Y.rank(k) || !equal(R, X.d(k), Y.d(k))) return false;
  return true;
}

// ---------------------------------------------------------------- constructions

Complex shift(const Complex& X, int m) {
  Complex Y = X;
  Y.L = layout_shift(X.L, m);
  if (m % 2)
    for (auto& d : Y.dv) d = neg(*X.R, d);
  return Y;
}

Complex dual(const Complex& X) {
  if (X.L.lo > X.L.hi) return X;
  Complex Y{X.R, Layout{-X.L.hi, -X.L.lo, X.L.rp, X.L.lp}, {}, {}};
  for (int n = Y.L.lo; n <= Y.L.hi; ++n) {
    Y.rk.push_back(X.rank(-n));
    Y.dv.push_back(transpose(X.d(-n - 1)));
  }
  return Y;
}

Complex direct_sum(const std::vector<Complex>& parts) {
  if (parts.empty()) fail(Err::Argument, "direct sum of nothing");
  std::vector<Layout> Ls;
  for (const auto& P : parts) Ls.push_back(P.L);
  RingP R = parts[0].R;
  return make_complex(
      R, layout_union(Ls),
      [&](int k) {
        size_t s = 0;
        for (const auto& P : parts) s += P.rank(k);
        return s;
      },
      [&](int k) {
        std::vector<Mat> b;
        for (const auto& P : parts) b.push_back(P.d(k));
        return diag_blocks(*R, b);
      });
}

Complex locally_finite_coproduct(const std::vector<Complex>& parts) {
  if (parts.empty()) fail(Err::Argument, "coproduct needs at least one summand");
  for (const auto& P : parts)
    if (!P.bounded()) fail(Err::Argument, "coproduct summands must be bounded to be locally finite as a list");
  return direct_sum(parts);
}

Complex cone(const ChainMap& f) {
  const Complex &X = f.X, &Y = f.Y;
  const Ring& R = *X.R;
  return make_complex(
      X.R, layout_union({layout_shift(X.L, 1), Y.L, layout_shift(f.f.L, 1)}),
      [&](int k) { return X.rank(k + 1) + Y.rank(k); },
      [&](int k) {
        Mat D = zeros(R, X.rank(k + 2) + Y.rank(k + 1), X.rank(k + 1) + Y.rank(k));
        set_block(D, 0, 0, neg(R, X.d(k + 1)));
        set_block(D, X.rank(k + 2), 0, f.at(k + 1));
        set_block(D, X.rank(k + 2), X.rank(k + 1), Y.d(k));
        return D;
      });
}

Complex localize(const Complex& X) {
  RingP F = X.R->fraction_ring();
  if (!F) fail(Err::Unsupported, "no total quotient ring available for " + X.R->name());
  Complex Y = X;
  Y.R = F;
  for (auto& d : Y.dv) d = map_entries(*F, d, [&](const Elem& e) { return X.R->to_fraction(e); });
  return Y;
}

Complex koszul_tensor(const Complex& X, const std::vector<Elem>& xs) {
  Complex Y = X;
  for (const auto& x : xs) {
    ChainMap m = identity(Y);
    for (auto& a : m.f.v) a = scale(*Y.R, x, a);
    Y = cone(m);
  }
  return Y;
}

// ---------------------------------------------------------------- maps

ChainMap identity(const Complex& X) {
  ChainMap m{X, X, MatSeq{X.L, {}}};
  for (int k = X.L.lo; k <= X.L.hi; ++k) m.f.v.push_back(eye(*X.R, X.rank(k)));
  return m;
}

ChainMap zero_map(const Complex& X, const Complex& Y) { return ChainMap{X, Y, MatSeq{}}; }

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  const Ring& R = *f.X.R;
  return make_map(f.X, g.Y, {f.f.L, g.f.L}, [&](int k) { return mul(R, g.at(k), f.at(k)); });
}

ChainMap add(const ChainMap& f, const ChainMap& g) {
  const Ring& R = *f.X.R;
  return make_map(f.X, f.Y, {f.f.L, g.f.L}, [&](int k) { return add(R, f.at(k), g.at(k)); });
}

ChainMap sub(const ChainMap& f, const ChainMap& g) {
  const Ring& R = *f.X.R;
  return make_map(f.X, f.Y, {f.f.L, g.f.L}, [&](int k) { return sub(R, f.at(k), g.at(k)); });
}

ChainMap neg(const ChainMap& f) {
  ChainMap g = f;
  for (auto& a : g.f.v) a = neg(*f.X.R, a);
  return g;
}

ChainMap shift_map(const ChainMap& f, int m) {
  ChainMap g{shift(f.X, m), shift(f.Y, m), f.f};
  g.f.L = layout_shift(f.f.L, m);
  return g;
}

ChainMap dual_map(const ChainMap& f) {
  ChainMap g{dual(f.Y), dual(f.X), MatSeq{}};
  if (f.f.L.lo <= f.f.L.hi) {
    g.f.L = Layout{-f.f.L.hi, -f.f.L.lo, f.f.L.rp, f.f.L.lp};
    for (int n = g.f.L.lo; n <= g.f.L.hi; ++n) g.f.v.push_back(transpose(f.at(-n)));
  }
  return g;
}

ChainMap sum_map(const std::vector<ChainMap>& fs) {
  std::vector<Complex> xs, ys;
  std::vector<Layout> Ls;
  for (const auto& f : fs) {
    xs.push_back(f.X);
    ys.push_back(f.Y);
    Ls.push_back(f.f.L);
  }
  const Ring& R = *fs[0].X.R;
  return make_map(direct_sum(xs), direct_sum(ys), Ls, [&](int k) {
    std::vector<Mat> b;
    for (const auto& f : fs) b.push_back(f.at(k));
    return diag_blocks(R, b);
  });
}

ChainMap localize_map(const ChainMap& f) {
  ChainMap g{localize(f.X), localize(f.Y), f.f};
  const Ring& R = *f.X.R;
  for (auto& a : g.f.v) a = map_entries(*g.X.R, a, [&](const Elem& e) { return R.to_fraction(e); });
  return g;
}

ChainMap cone_in(const ChainMap& f) {
  Complex C = cone(f);
  const Ring& R = *f.X.R;
  return make_map(f.Y, C, {}, [&](int k) {
    Mat m = zeros(R, C.rank(k), f.Y.rank(k));
    set_block(m, f.X.rank(k + 1), 0, eye(R, f.Y.rank(k)));
    return m;
  });
}

ChainMap cone_out(const ChainMap& f) {
  Complex C = cone(f);
  Complex X1 = shift(f.X, 1);
  const Ring& R = *f.X.R;
  return make_map(C, X1, {}, [&](int k) {
    Mat m = zeros(R, X1.rank(k), C.rank(k));
    set_block(m, 0, 0, eye(R, X1.rank(k)));
    return m;
  });
}

ChainMap cone_map(const ChainMap& f, const ChainMap& g, const ChainMap& u, const ChainMap& v) {
  const Ring& R = *f.X.R;
  return make_map(cone(f), cone(g), {layout_shift(u.f.L, 1), v.f.L},
                  [&](int k) { return diag_blocks(R, {u.at(k + 1), v.at(k)}); });
}

bool is_chain_map(const ChainMap& f) {
  const Ring& R = *f.X.R;
  auto [a, b] = check_range({f.X.L, f.Y.L, f.f.L});
  for (int k = a; k <= b; ++k) {
    Mat fk = f.at(k);
    if (fk.r != f.Y.rank(k) || fk.c != f.X.rank(k)) return false;
    if (!equal(R, mul(R, f.Y.d(k), fk), mul(R, f.at(k + 1), f.X.d(k)))) return false;
  }
  return true;
}

bool equal_map(const ChainMap& f, const ChainMap& g) {
  const Ring& R = *f.X.R;
  auto [a, b] = check_range({f.X.L, f.Y.L, f.f.L, g.f.L});
  for (int k = a; k <= b; ++k)
    if (!equal(R, f.at(k), g.at(k))) return false;
  return true;
}

bool is_zero_map(const ChainMap& f) {
  for (const auto& a : f.f.v)
    if (!is_zero(*f.X.R, a)) return false;
  return true;
}

// ---------------------------------------------------------------- cohomology

PresentedModule cohomology(const Complex& X, int k, Mat* gens) {
  const Ring& R = *X.R;
  Mat din = X.d(k - 1), dout = X.d(k);
  return cohomology_presented(X.R, din, dout, zeros(R, X.rank(k), 0), zeros(R, X.rank(k + 1), 0), gens);
}

CBZ cbz(const Complex& X, int k) {
  const Ring& R = *X.R;
  CBZ out;
  Mat din = X.d(k - 1);
  out.C = cokernel_presentation(X.R, din);
  out.B = subquotient(X.R, din, zeros(R, X.rank(k), 0), &out.Bgens);
  out.Z = subquotient(X.R, kernel(R, X.d(k)), zeros(R, X.rank(k), 0), &out.Zgens);
  return out;
}

bool is_acyclic(const Complex& X) {
  auto [a, b] = check_range({X.L});
  for (int k = a; k <= b; ++k)
    if (!is_zero_module(cohomology(X, k))) return false;
  return true;
}

bool is_quasi_iso(const ChainMap& f) { return is_acyclic(cone(f)); }

// ---------------------------------------------------------------- banded solver

std::optional<std::vector<Mat>> solve_band(const Ring& R, const BandSystem& S) {
  auto has = [&](int k) { return k >= S.a && k <= S.b; };
  auto sz = [&](int k) { return has(k) ? S.usize(k) : size_t(0); };
  struct Step {
    Mat t, N, s0, Ks;
  };
  std::vector<Step> st;
  // parametrization of u_{e0}
  Mat t = zeros(R, sz(S.e0), 1);
  Mat N = eye(R, sz(S.e0));
  for (int k = S.e0; k <= S.e1; ++k) {
    size_t nsz = sz(k + 1);
    Mat c = S.c(k);
    Mat Ak = has(k) ? S.A(k) : zeros(R, c.r, 0);
    Mat Bk = nsz ? S.B(k) : zeros(R, c.r, 0);
    Mat rhs = sub(R, c, mul(R, Ak, t));
    Mat big = hcat(R, {Bk, mul(R, Ak, N)}, c.r);
    auto x = solve(R, big, rhs);
    if (!x) return std::nullopt;
    Mat K = reduce_top(R, kernel(R, big), nsz);
    size_t ssz = N.c;
    st.push_back(Step{t, N, block(*x, nsz, 0, ssz, 1), block(K, nsz, 0, ssz, K.c)});
    t = block(*x, 0, 0, nsz, 1);
    N = block(K, 0, 0, nsz, K.c);
  }
  std::vector<Mat> u;
  for (int k = S.a; k <= S.b; ++k) u.push_back(zeros(R, sz(k), 1));
  Mat z = zeros(R, N.c, 1);
  if (has(S.e1 + 1)) u[size_t(S.e1 + 1 - S.a)] = add(R, t, mul(R, N, z));
  for (int k = S.e1; k >= S.e0; --k) {
    const Step& s = st[size_t(k - S.e0)];
    Mat sk = add(R, s.s0, mul(R, s.Ks, z));
    if (has(k)) u[size_t(k - S.a)] = add(R, s.t, mul(R, s.N, sk));
    z = sk;
  }
  return u;
}

namespace {

// Degree range for homotopy-type systems; widened on periodic sides.
struct SysRange {
  int e0, e1;
  bool truncated;
};

SysRange sys_range(const std::vector<Layout>& Ls, int margin) {
  Layout U = layout_union(Ls);
  if (U.lo > U.hi) return {0, -1, false};
  int e0 = U.lp ? U.lo - margin * U.lp : U.lo - 1;
  int e1 = U.rp ? U.hi + margin * U.rp : U.hi + 1;
  return {e0, e1, !U.bounded()};
}

}  // namespace

std::optional<Homotopy> null_homotopy(const ChainMap& f, int margin) {
  const Ring& R = *f.X.R;
  const Complex &X = f.X, &Y = f.Y;
  SysRange r = sys_range({X.L, Y.L, f.f.L}, margin);
  if (r.e0 > r.e1) return Homotopy{};
  BandSystem S;
  S.a = r.e0;
  S.b = r.e1 + 1;
  S.e0 = r.e0;
  S.e1 = r.e1;
  S.usize = [&](int k) { return Y.rank(k - 1) * X.rank(k); };
  S.A = [&](int k) { return kron(R, eye(R, X.rank(k)), Y.d(k - 1)); };
  S.B = [&](int k) { return kron(R, transpose(X.d(k)), eye(R, Y.rank(k))); };
  S.c = [&](int k) { return vec(f.at(k)); };
  auto u = solve_band(R, S);
  if (!u) return std::nullopt;
  Homotopy h;
  h.window_certified = r.truncated;
  h.h.L = Layout{S.a, S.b, 0, 0};
  for (int k = S.a; k <= S.b; ++k) h.h.v.push_back(unvec((*u)[size_t(k - S.a)], Y.rank(k - 1), X.rank(k)));
  return h;
}

bool check_homotopy(const ChainMap& f, const Homotopy& h, int margin) {
  const Ring& R = *f.X.R;
  const Complex &X = f.X, &Y = f.Y;
  int a, b;
  if (h.window_certified) {
    a = h.h.L.lo;
    b = h.h.L.hi - 1;
  } else {
    SysRange r = sys_range({X.L, Y.L, f.f.L, h.h.L}, margin);
    a = r.e0;
    b = r.e1;
  }
  for (int k = a; k <= b; ++k) {
    Mat lhs = add(R, mul(R, Y.d(k - 1), h.at(X, Y, k)), mul(R, h.at(X, Y, k + 1), X.d(k)));
    if (!equal(R, lhs, f.at(k))) return false;
  }
  return true;
}

bool homotopic(const ChainMap& f, const ChainMap& g, int margin) { return null_homotopy(sub(f, g), margin).has_value(); }

std::optional<ChainMap> lift_through(const ChainMap& f, const ChainMap& g, int margin) {
  // unknowns v_k = (vec u^k ; vec h^k), u : Z -> W, h : Z^k -> Y^{k-1}
  const Ring& R = *f.X.R;
  const Complex &Z = f.X, &Y = f.Y, &W = g.X;
  SysRange r = sys_range({Z.L, Y.L, W.L, f.f.L, g.f.L}, margin);
  if (r.e0 > r.e1) return zero_map(Z, W);
  auto us = [&](int k) { return W.rank(k) * Z.rank(k); };
  auto hs = [&](int k) { return Y.rank(k - 1) * Z.rank(k); };
  BandSystem S;
  S.a = r.e0;
  S.b = r.e1 + 1;
  S.e0 = r.e0;
  S.e1 = r.e1;
  S.usize = [&](int k) { return us(k) + hs(k); };
  S.A = [&](int k) {
    size_t z = Z.rank(k);
    Mat top = hcat(R, {kron(R, eye(R, z), W.d(k)), zeros(R, W.rank(k + 1) * z, hs(k))}, W.rank(k + 1) * z);
    Mat bot = hcat(R, {kron(R, eye(R, z), g.at(k)), kron(R, eye(R, z), Y.d(k - 1))}, Y.rank(k) * z);
    return vcat(R, {top, bot}, us(k) + hs(k));
  };
  S.B = [&](int k) {
    size_t z = Z.rank(k);
    Mat dz = transpose(Z.d(k));
    Mat top = hcat(R, {neg(R, kron(R, dz, eye(R, W.rank(k + 1)))), zeros(R, W.rank(k + 1) * z, hs(k + 1))},
                   W.rank(k + 1) * z);
    Mat bot = hcat(R, {zeros(R, Y.rank(k) * z, us(k + 1)), kron(R, dz, eye(R, Y.rank(k)))}, Y.rank(k) * z);
    return vcat(R, {top, bot}, us(k + 1) + hs(k + 1));
  };
  S.c = [&](int k) { return vcat(R, {zeros(R, W.rank(k + 1) * Z.rank(k), 1), vec(f.at(k))}, 1); };
  auto v = solve_band(R, S);
  if (!v) return std::nullopt;
  std::map<int, Mat> comp;
  for (int k = S.a; k <= S.b; ++k) comp[k] = unvec(block((*v)[size_t(k - S.a)], 0, 0, us(k), 1), W.rank(k), Z.rank(k));
  ChainMap u{Z, W, MatSeq{Layout{S.a, S.b, 0, 0}, {}}};
  for (int k = S.a; k <= S.b; ++k) u.f.v.push_back(comp[k]);
  return u;
}

std::optional<ChainMap> factor_through(const ChainMap& f, const ChainMap& g, int margin) {
  // u : W -> Y with u o g ~ f, where f : X -> Y and g : X -> W. Dualize to a lift.
  auto l = lift_through(dual_map(f), dual_map(g), margin);
  if (!l) return std::nullopt;
  ChainMap u = dual_map(*l);
  u.X = g.Y;
  u.Y = f.Y;
  return u;
}

namespace {

// Chain maps X -> Y as vectors stacking vec f^k over [a, b]; C is the chain
// condition, H sends stacked homotopies to their boundaries.
struct HomSystem {
  int a, b;
  std::vector<size_t> fo;
  Mat C, H;
};

HomSystem hom_system(const Complex& X, const Complex& Y) {
  if (!X.bounded() || !Y.bounded()) fail(Err::Unsupported, "chain map spaces need bounded complexes");
  const Ring& R = *X.R;
  HomSystem S;
  std::tie(S.a, S.b) = check_range({X.L, Y.L});
  std::vector<size_t> ho;
  size_t nf = 0, nh = 0, nc = 0;
  for (int k = S.a; k <= S.b; ++k) {
    S.fo.push_back(nf);
    nf += Y.rank(k) * X.rank(k);
    ho.push_back(nh);
    nh += Y.rank(k - 1) * X.rank(k);
    nc += Y.rank(k + 1) * X.rank(k);
  }
  S.C = zeros(R, nc, nf);
  S.H = zeros(R, nf, nh);
  size_t row = 0;
  for (int k = S.a; k <= S.b; ++k) {
    size_t i = size_t(k - S.a);
    set_block(S.C, row, S.fo[i], kron(R, eye(R, X.rank(k)), Y.d(k)));
    if (k < S.b) set_block(S.C, row, S.fo[i + 1], neg(R, kron(R, transpose(X.d(k)), eye(R, Y.rank(k + 1)))));
    row += Y.rank(k + 1) * X.rank(k);
    set_block(S.H, S.fo[i], ho[i], kron(R, eye(R, X.rank(k)), Y.d(k - 1)));
    if (k < S.b) set_block(S.H, S.fo[i], ho[i + 1], kron(R, transpose(X.d(k)), eye(R, Y.rank(k))));
  }
  return S;
}

ChainMap unstack(const Complex& X, const Complex& Y, const HomSystem& S, const Mat& v) {
  ChainMap f{X, Y, MatSeq{Layout{S.a, S.b, 0, 0}, {}}};
  for (int k = S.a; k <= S.b; ++k) {
    size_t n = Y.rank(k) * X.rank(k);
    f.f.v.push_back(unvec(block(v, S.fo[size_t(k - S.a)], 0, n, 1), Y.rank(k), X.rank(k)));
  }
  return f;
}

}  // namespace

std::vector<ChainMap> chain_map_generators(const Complex& X, const Complex& Y) {
  HomSystem S = hom_system(X, Y);
  Mat K = kernel(*X.R, S.C);
  std::vector<ChainMap> out;
  for (size_t j = 0; j < K.c; ++j) out.push_back(unstack(X, Y, S, col(K, j)));
  return out;
}

PresentedModule homotopy_hom(const Complex& X, const Complex& Y, Mat* gens) {
  HomSystem S = hom_system(X, Y);
  return subquotient(X.R, kernel(*X.R, S.C), S.H, gens);
}

// ---------------------------------------------------------------- split complexes

namespace {

struct SplitInfo {
  Mat Bg, Hc, C, P, Pinv;
  bool ok = false;
};

SplitInfo split_info(const Complex& X, int k, std::map<int, Mat>& bcache) {
  const Ring& R = *X.R;
  auto bgens = [&](int j) -> const Mat& {
    auto it = bcache.find(j);
    if (it != bcache.end()) return it->second;
    Mat din = X.d(j - 1);
    Mat g = din.c ? min_gens(R, din, zeros(R, din.r, 0)) : din;
    return bcache[j] = g;
  };
  SplitInfo s;
  s.Bg = bgens(k);
  Mat Bn = bgens(k + 1);
  auto lift = solve(R, X.d(k), Bn);
  if (!lift) return s;
  s.C = *lift;
  Mat Z = kernel(R, X.d(k));
  s.Hc = Z.c ? min_gens(R, Z, s.Bg) : Z;
  size_t n = X.rank(k);
  s.P = hcat(R, {s.Bg, s.Hc, s.C}, n);
  if (s.P.c != n) return s;
  auto inv = solve(R, s.P, eye(R, n));
  if (!inv) return s;
  s.Pinv = *inv;
  s.ok = true;
  return s;
}

}  // namespace

std::optional<SplitDecomposition> split_decompose(const Complex& X) {
  const Ring& R = *X.R;
  std::map<int, SplitInfo> info;
  std::map<int, Mat> bcache;
  auto get = [&](int k) -> const SplitInfo& {
    auto it = info.find(k);
    if (it != info.end()) return it->second;
    return info[k] = split_info(X, k, bcache);
  };
  auto [a, b] = check_range({X.L});
  for (int k = a; k <= b; ++k)
    if (!get(k).ok) return std::nullopt;
  auto hr = [&](int k) { return get(k).Hc.c; };
  auto br = [&](int k) { return get(k).Bg.c; };
  auto cr = [&](int k) { return get(k).C.c; };
  SplitDecomposition out;
  out.Xp = make_complex(X.R, X.L, hr, [&](int k) { return zeros(R, hr(k + 1), hr(k)); });
  out.N = make_complex(
      X.R, X.L, [&](int k) { return br(k) + cr(k); },
      [&](int k) {
        Mat D = zeros(R, br(k + 1) + cr(k + 1), br(k) + cr(k));
        set_block(D, 0, br(k), eye(R, cr(k)));
        return D;
      });
  Complex S = direct_sum({out.Xp, out.N});
  // sum basis order: H part, then B part, then C part; P has columns B, H, C
  auto perm = [&](int k) {
    size_t h = hr(k), bb = br(k), c = cr(k);
    Mat Pm = zeros(R, bb + h + c, h + bb + c);
    for (size_t i = 0; i < h; ++i) Pm(bb + i, i) = R.one();
    for (size_t i = 0; i < bb; ++i) Pm(i, h + i) = R.one();
    for (size_t i = 0; i < c; ++i) Pm(bb + h + i, h + bb + i) = R.one();
    return Pm;  // sum coordinates -> P coordinates
  };
  out.from_sum = make_map(S, X, {}, [&](int k) { return mul(R, get(k).P, perm(k)); });
  out.to_sum = make_map(X, S, {}, [&](int k) { return mul(R, transpose(perm(k)), get(k).Pinv); });
  if (!is_chain_map(out.from_sum) || !is_chain_map(out.to_sum)) return std::nullopt;
  return out;
}

SplitReport split_criteria(const Complex& X) {
  const Ring& R = *X.R;
  SplitReport rep;
  auto [a, b] = check_range({X.L});
  rep.dsd = rep.c_projective = rep.b_summand = true;
  for (int k = a; k <= b; ++k) {
    Mat d = X.d(k);
    if (rep.dsd && d.r && d.c && !solve(R, kron(R, transpose(d), d), vec(d))) rep.dsd = false;
    if (rep.c_projective && !is_projective(coker_raw(X.R, X.d(k - 1)))) rep.c_projective = false;
    if (rep.b_summand) {
      Mat din = X.d(k - 1);
      Mat Bg = din.c ? min_gens(R, din, zeros(R, din.r, 0)) : din;
      size_t bb = Bg.c, n = Bg.r;
      if (bb) {
        Mat K = kernel(R, Bg);
        Mat sys = hcat(R, {kron(R, transpose(Bg), eye(R, bb)), kron(R, eye(R, bb), K)}, bb * bb);
        if (!solve(R, sys, vec(eye(R, bb)))) rep.b_summand = false;
      }
      (void)n;
    }
  }
  rep.decomposed = split_decompose(X).has_value();
  return rep;
}

bool is_split(const Complex& X) { return split_decompose(X).has_value(); }

// ---------------------------------------------------------------- rho and sigma

PresentedModule hom_complex_cohomology(const Complex& X, const PresentedModule& M, int n, Mat* gens) {
  const Ring& R = *X.R;
  int i = -n;
  size_t p = M.n;
  Mat Dout = kron(R, transpose(X.d(i - 1)), eye(R, p));
  Mat Din = kron(R, transpose(X.d(i)), eye(R, p));
  return cohomology_presented(X.R, Din, Dout, kron(R, eye(R, X.rank(i)), M.rel), kron(R, eye(R, X.rank(i - 1)), M.rel),
                              gens);
}

PresentedModule tensor_complex_cohomology(const Complex& X, const PresentedModule& M, int n, Mat* gens) {
  const Ring& R = *X.R;
  size_t p = M.n;
  Mat Dout = kron(R, X.d(n), eye(R, p));
  Mat Din = kron(R, X.d(n - 1), eye(R, p));
  return cohomology_presented(X.R, Din, Dout, kron(R, eye(R, X.rank(n)), M.rel), kron(R, eye(R, X.rank(n + 1)), M.rel),
                              gens);
}

ModuleMap rho_map(const Complex& X, const PresentedModule& M, int i) {
  const Ring& R = *X.R;
  size_t p = M.n;
  Mat Sg, Zh, Hg;
  PresentedModule src = hom_complex_cohomology(X, M, -i, &Sg);
  PresentedModule H = cohomology(X, i, &Zh);
  PresentedModule dst = hom_module(H, M, &Hg);
  Mat img = mul(R, kron(R, transpose(Zh), eye(R, p)), Sg);
  auto y = solve(R, hcat(R, {Hg, kron(R, eye(R, H.n), M.rel)}, Hg.r), img);
  if (!y) fail(Err::Validation, "rho does not land in Hom(H, M)");
  return ModuleMap{src, dst, block(*y, 0, 0, Hg.c, img.c)};
}

namespace {

PresentedModule tensor_presentation(const PresentedModule& H, const PresentedModule& M) {
  const Ring& R = *H.R;
  size_t p = M.n;
  Mat rel = hcat(R, {kron(R, H.rel, eye(R, p)), kron(R, eye(R, H.n), M.rel)}, H.n * p);
  return PresentedModule{H.R, H.n * p, rel};
}

}  // namespace

ModuleMap sigma_map(const Complex& X, const PresentedModule& M, int i) {
  const Ring& R = *X.R;
  size_t p = M.n;
  Mat Zh, Tg;
  PresentedModule H = cohomology(X, i, &Zh);
  PresentedModule src = tensor_presentation(H, M);
  PresentedModule dst = tensor_complex_cohomology(X, M, i, &Tg);
  Mat img = kron(R, Zh, eye(R, p));
  Mat sys = hcat(R, {Tg, kron(R, X.d(i - 1), eye(R, p)), kron(R, eye(R, X.rank(i)), M.rel)}, Tg.r);
  auto y = solve(R, sys, img);
  if (!y) fail(Err::Validation, "sigma does not land in H(X (x) M)");
  return ModuleMap{src, dst, block(*y, 0, 0, Tg.c, img.c)};
}

json SequencesReport::to_json() const {
  return {{"rho_kernel_is_ext1", rho_kernel},
          {"rho_image_is_kernel_to_ext2", rho_middle},
          {"ext2_adapted_matches_generic", ext2_consistent},
          {"sigma_kernel_is_tor2_image", sigma_kernel},
          {"sigma_cokernel_is_tor1", sigma_cokernel},
          {"exact", ok()}};
}

SequencesReport ab_sequences_check(const Complex& X, const PresentedModule& M, int i) {
  const Ring& R = *X.R;
  RingP Rp = X.R;
  size_t p = M.n;
  SequencesReport rep;
  PresentedModule C = coker_raw(Rp, X.d(i));

  ModuleMap rho = rho_map(X, M, i);
  rep.rho_kernel = same_invariants(map_kernel(rho), ext(C, M, 1));

  // resolution of C^{i+1} adapted to X: X^{i+1} <- X^i <- R^z <- R^w
  Mat Zg = kernel(R, X.d(i));
  if (Zg.c) Zg = min_gens(R, Zg, zeros(R, Zg.r, 0));
  Mat Zrel = Zg.c ? kernel(R, Zg) : zeros(R, 0, 0);
  size_t z = Zg.c, w = Zrel.c, ri = X.rank(i);
  Mat Din = kron(R, transpose(Zg), eye(R, p));
  Mat Dout = kron(R, transpose(Zrel), eye(R, p));
  Mat Bmid = kron(R, eye(R, z), M.rel);
  Mat E2g;
  PresentedModule E2 = cohomology_presented(Rp, Din, Dout, Bmid, kron(R, eye(R, w), M.rel), &E2g);
  rep.ext2_consistent = same_invariants(E2, ext(C, M, 2));

  // connecting map Hom(H^i, M) -> Ext^2(C^{i+1}, M)
  Mat Zh, Hg;
  PresentedModule H = cohomology(X, i, &Zh);
  PresentedModule D = hom_module(H, M, &Hg);
  auto T = solve(R, hcat(R, {Zh, X.d(i - 1)}, ri), Zg);
  if (!T) fail(Err::Validation, "cocycle generators outside Z^i");
  Mat Tm = block(*T, 0, 0, H.n, z);
  Mat dimg = mul(R, kron(R, transpose(Tm), eye(R, p)), Hg);
  auto dy = solve(R, hcat(R, {E2g, Din, Bmid}, E2g.r), dimg);
  if (!dy) fail(Err::Validation, "connecting map does not land in Ext^2");
  ModuleMap delta{D, E2, block(*dy, 0, 0, E2g.c, dimg.c)};
  Mat kd;
  map_kernel(delta, &kd);
  bool comp_zero = in_image(R, E2.rel, mul(R, delta.f, rho.f));
  bool ker_in_im = in_image(R, hcat(R, {rho.f, D.rel}, D.n), kd);
  rep.rho_middle = comp_zero && ker_in_im;

  // sigma side: Tor_2(C^{i+1}, M) -> H^i (x) M
  ModuleMap sigma = sigma_map(X, M, i);
  Mat T2g;
  cohomology_presented(Rp, kron(R, Zrel, eye(R, p)), kron(R, Zg, eye(R, p)), kron(R, eye(R, z), M.rel),
                       kron(R, eye(R, ri), M.rel), &T2g);
  Mat tau = mul(R, kron(R, Tm, eye(R, p)), T2g);
  Mat ks;
  map_kernel(sigma, &ks);
  bool tau_in_ker = in_image(R, sigma.dst.rel, mul(R, sigma.f, tau));
  bool ker_in_tau = in_image(R, hcat(R, {tau, sigma.src.rel}, sigma.src.n), ks);
  rep.sigma_kernel = tau_in_ker && ker_in_tau;
  rep.sigma_cokernel = same_invariants(map_cokernel(sigma), tor(C, M, 1));
  return rep;
}

// ---------------------------------------------------------------- json

namespace {

json mats_json(const Ring& R, const std::vector<Mat>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(mat_json(R, m));
  return a;
}

}  // namespace

json complex_json(const Complex& X) {
  const Ring& R = *X.R;
  json j;
  j["ring"] = R.to_json();
  const Layout& L = X.L;
  if (L.lo > L.hi) {
    j["window"] = {{"lo", 0}, {"hi", -1}, {"ranks", json::array()}, {"d", json::array()}};
    j["left_tail"] = nullptr;
    j["right_tail"] = nullptr;
    return j;
  }
  std::vector<Mat> wd;
  for (int k = L.lo; k < L.hi; ++k) wd.push_back(X.d(k));
  if (L.rp) wd.push_back(X.d(L.hi));
  j["window"] = {{"lo", L.lo}, {"hi", L.hi}, {"ranks", X.rk}, {"d", mats_json(R, wd)}};
  if (L.lp) {
    std::vector<size_t> rk;
    std::vector<Mat> ds;
    for (int t = 1; t <= L.lp; ++t) {
      rk.push_back(X.rank(L.lo - t));
      ds.push_back(X.d(L.lo - t));
    }
    j["left_tail"] = {{"period", L.lp}, {"ranks", rk}, {"d", mats_json(R, ds)}};
  } else {
    j["left_tail"] = nullptr;
  }
  if (L.rp) {
    std::vector<size_t> rk;
    std::vector<Mat> ds;
    for (int t = 1; t <= L.rp; ++t) {
      rk.push_back(X.rank(L.hi + t));
      ds.push_back(X.d(L.hi + t));
    }
    j["right_tail"] = {{"period", L.rp}, {"ranks", rk}, {"d", mats_json(R, ds)}};
  } else {
    j["right_tail"] = nullptr;
  }
  return j;
}

Complex complex_from_json(const json& j, RingP R) {
  if (!R) {
    if (!j.contains("ring")) fail(Err::Validation, "complex fixture needs a ring");
    R = ring_from_json(j.at("ring"));
  }
  if (!j.contains("window")) fail(Err::Validation, "complex fixture needs a window");
  const json& w = j.at("window");
  int lo = w.at("lo").get<int>(), hi = w.at("hi").get<int>();
  auto wr = w.at("ranks").get<std::vector<size_t>>();
  if (hi - lo + 1 != int(wr.size()) && !(hi < lo && wr.empty()))
    fail(Err::Validation, "window ranks do not match [lo, hi]");
  auto tail = [&](const char* key, int& p, std::vector<size_t>& rk, json& ds) {
    if (!j.contains(key) || j.at(key).is_null()) return;
    const json& t = j.at(key);
    p = t.at("period").get<int>();
    if (p <= 0) fail(Err::Validation, std::string(key) + " period must be positive");
    rk = t.at("ranks").get<std::vector<size_t>>();
    ds = t.at("d");
    if (int(rk.size()) != p || int(ds.size()) != p) fail(Err::Validation, std::string(key) + " must list one period");
    if (hi < lo) fail(Err::Validation, "periodic tails need a nonempty window");
  };
  int lp = 0, rp = 0;
  std::vector<size_t> lr, rr;
  json ld, rd;
  tail("left_tail", lp, lr, ld);
  tail("right_tail", rp, rr, rd);
  // internal window covers one period of each tail
  Layout L{lo - lp, hi + rp, lp, rp};
  std::vector<size_t> rk;
  for (int t = lp; t >= 1; --t) rk.push_back(lr[size_t(t - 1)]);
  rk.insert(rk.end(), wr.begin(), wr.end());
  rk.insert(rk.end(), rr.begin(), rr.end());
  Complex X{R, L, rk, {}};
  const json& wd = w.value("d", json::array());
  size_t expect = hi >= lo ? size_t(hi - lo) + (rp ? 1 : 0) : 0;
  if (wd.size() != expect)
    fail(Err::Validation, "window lists " + std::to_string(wd.size()) + " differentials, expected " + std::to_string(expect));
  for (int k = L.lo; k <= L.hi; ++k) {
    size_t r = X.rank(k + 1), c = X.rank(k);
    json src;
    if (k < lo)
      src = ld[size_t(lo - 1 - k)];
    else if (k > hi)
      src = rd[size_t(k - hi - 1)];
    else if (size_t(k - lo) < wd.size())
      src = wd[size_t(k - lo)];
    X.dv.push_back(mat_from_json(*R, src, r, c));
  }
  if (!valid_complex(X)) fail(Err::Validation, "d o d is not zero");
  if (L.bounded()) return make_complex(R, L, [&](int k) { return X.rank(k); }, [&](int k) { return X.d(k); });
  return X;
}

json map_json(const ChainMap& f) {
  const Ring& R = *f.X.R;
  return {{"lo", f.f.L.lo}, {"left_period", f.f.L.lp}, {"right_period", f.f.L.rp}, {"f", mats_json(R, f.f.v)}};
}

ChainMap map_from_json(const json& j, const Complex& X, const Complex& Y) {
  const Ring& R = *X.R;
  ChainMap m{X, Y, MatSeq{}};
  const json& fs = j.at("f");
  int lo = j.value("lo", 0);
  m.f.L = Layout{lo, lo + int(fs.size()) - 1, j.value("left_period", 0), j.value("right_period", 0)};
  for (int k = m.f.L.lo; k <= m.f.L.hi; ++k) m.f.v.push_back(mat_from_json(R, fs[size_t(k - lo)], Y.rank(k), X.rank(k)));
  if (!is_chain_map(m)) fail(Err::Validation, "components do not commute with the differentials");
  return m;
}

json homotopy_json(const Complex& X, const Complex& Y, const Homotopy& h) {
  json a = json::array();
  for (int k = h.h.L.lo; k <= h.h.L.hi; ++k) a.push_back(mat_json(*X.R, h.at(X, Y, k)));
  return {{"lo", h.h.L.lo}, {"h", a}, {"window_certified", h.window_certified}};
}

std::string complex_str(const Complex& X) {
  if (X.L.lo > X.L.hi) return "0";
  std::string s;
  if (X.L.lp) s += "(... period " + std::to_string(X.L.lp) + ") ";
  for (int k = X.L.lo; k <= X.L.hi; ++k) {
    s += "R^" + std::to_string(X.rank(k)) + "@" + std::to_string(k);
    if (k < X.L.hi || X.L.rp) s += " -" + mat_str(*X.R, X.d(k)) + "-> ";
  }
  if (X.L.rp) s += "(... period " + std::to_string(X.L.rp) + ")";
  return s;
}

}  // namespace stabcx
