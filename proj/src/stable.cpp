#include "stable.hpp"

#include <map>

namespace stabcx {

namespace {

std::pair<int, int> range_of(const std::vector<Layout>& Ls) {
  Layout U = layout_union(Ls);
  if (U.lo > U.hi) return {0, -1};
  return {U.lo - U.lp - 1, U.hi + U.rp + 1};
}

Mat select_rows(const Ring& R, size_t n, size_t drop) {
  Mat P = zeros(R, n - 1, n);
  for (size_t i = 0, r = 0; i < n; ++i)
    if (i != drop) P(r++, i) = R.one();
  return P;
}

ChainMap with_ends(ChainMap f, const Complex& X, const Complex& Y) {
  f.X = X;
  f.Y = Y;
  return f;
}

}  // namespace

bool is_add(const Complex& X) { return is_split(X); }

bool is_cohomologically_surjective(const ChainMap& f) {
  const Ring& R = *f.X.R;
  auto [a, b] = range_of({f.X.L, f.Y.L, f.f.L});
  for (int k = a; k <= b; ++k) {
    Mat zx, zy;
    cohomology(f.X, k, &zx);
    PresentedModule H = cohomology(f.Y, k, &zy);
    if (H.n == 0) continue;
    Mat im = hcat(R, {mul(R, f.at(k), zx), f.Y.d(k - 1)}, f.Y.rank(k));
    if (!in_image(R, im, zy)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- minimization

Reduction minimize(const Complex& X) {
  const Ring& R = *X.R;
  if (!X.bounded() || X.L.lo > X.L.hi) return Reduction{X, identity(X), identity(X)};
  int lo = X.L.lo - 1, hi = X.L.hi + 1;
  auto at = [&](int k) { return size_t(k - lo); };
  std::vector<size_t> rk;
  std::vector<Mat> d, to, from;
  for (int k = lo; k <= hi; ++k) {
    rk.push_back(X.rank(k));
    d.push_back(X.d(k));
    to.push_back(eye(R, X.rank(k)));
    from.push_back(eye(R, X.rank(k)));
  }
  for (;;) {
    bool found = false;
    for (int k = lo; k < hi && !found; ++k) {
      Mat& D = d[at(k)];
      for (size_t j = 0; j < D.c && !found; ++j)
        for (size_t i = 0; i < D.r && !found; ++i) {
          if (!R.is_unit(D(i, j))) continue;
          found = true;
          size_t n = D.c, m = D.r;
          Elem phi_inv = R.inv(D(i, j));
          Mat delta = block(D, i, 0, 1, n), gamma = block(D, 0, j, m, 1);
          Mat Pn = select_rows(R, n, j), Pm = select_rows(R, m, i);
          // d' = eps - gamma phi^-1 delta on the complements
          Mat full = sub(R, D, scale(R, phi_inv, mul(R, gamma, delta)));
          Mat Dn = mul(R, Pm, mul(R, full, transpose(Pn)));
          Mat tk1 = Pm;
          Mat g = scale(R, R.neg(phi_inv), mul(R, Pm, gamma));
          for (size_t r = 0; r < m - 1; ++r) tk1(r, i) = g(r, 0);
          Mat fk = transpose(Pn);
          Mat row = scale(R, R.neg(phi_inv), mul(R, delta, transpose(Pn)));
          for (size_t c = 0; c < n - 1; ++c) fk(j, c) = row(0, c);
          Mat fk1 = transpose(Pm);
          to[at(k)] = mul(R, Pn, to[at(k)]);
          to[at(k + 1)] = mul(R, tk1, to[at(k + 1)]);
          from[at(k)] = mul(R, from[at(k)], fk);
          from[at(k + 1)] = mul(R, from[at(k + 1)], fk1);
          if (k > lo) d[at(k - 1)] = mul(R, Pn, d[at(k - 1)]);
          if (k + 1 < hi) d[at(k + 1)] = mul(R, d[at(k + 1)], transpose(Pm));
          D = Dn;
          rk[at(k)] = n - 1;
          rk[at(k + 1)] = m - 1;
        }
    }
    if (!found) break;
  }
  Complex Y = make_complex(
      X.R, Layout{lo, hi, 0, 0}, [&](int k) { return (k < lo || k > hi) ? size_t(0) : rk[at(k)]; },
      [&](int k) {
        if (k < lo || k >= hi) return zeros(R, (k + 1 < lo || k + 1 > hi) ? 0 : rk[at(k + 1)], (k < lo || k > hi) ? 0 : rk[at(k)]);
        return d[at(k)];
      });
  auto pick = [&](const std::vector<Mat>& v, size_t r, size_t c, int k) {
    return (k < lo || k > hi) ? zeros(R, r, c) : v[at(k)];
  };
  ChainMap t = make_map(X, Y, {}, [&](int k) { return pick(to, Y.rank(k), X.rank(k), k); });
  ChainMap f = make_map(Y, X, {}, [&](int k) { return pick(from, X.rank(k), Y.rank(k), k); });
  return Reduction{Y, t, f};
}

Reduction stable_core(const Complex& X) {
  const Ring& R = *X.R;
  Reduction m = minimize(X);
  const Complex& Y = m.Y;
  if (!Y.bounded() || Y.L.lo > Y.L.hi) return m;
  std::map<int, std::vector<size_t>> keep;
  for (int k = Y.L.lo; k <= Y.L.hi; ++k) {
    Mat out = Y.d(k), in = Y.d(k - 1);
    for (size_t j = 0; j < Y.rank(k); ++j) {
      bool isolated = is_zero(R, col(out, j)) && is_zero(R, rows_of(in, {j}));
      if (!isolated) keep[k].push_back(j);
    }
  }
  auto proj = [&](int k) { return rows_of(eye(R, Y.rank(k)), keep[k]); };
  Complex C = make_complex(
      X.R, Y.L, [&](int k) { return keep.count(k) ? keep[k].size() : size_t(0); },
      [&](int k) {
        if (!keep.count(k)) return zeros(R, keep.count(k + 1) ? keep[k + 1].size() : 0, 0);
        return mul(R, proj(k + 1), mul(R, Y.d(k), transpose(proj(k))));
      });
  ChainMap p = make_map(Y, C, {}, [&](int k) { return keep.count(k) ? proj(k) : zeros(R, 0, Y.rank(k)); });
  ChainMap i = make_map(C, Y, {}, [&](int k) { return keep.count(k) ? transpose(proj(k)) : zeros(R, Y.rank(k), 0); });
  return Reduction{C, compose(p, m.to), compose(m.from, i)};
}

// ---------------------------------------------------------------- approximations

RightApprox right_add_approx(const Complex& X) {
  const Ring& R = *X.R;
  std::map<int, Mat> gens;
  auto g = [&](int k) -> const Mat& {
    auto it = gens.find(k);
    if (it != gens.end()) return it->second;
    Mat z;
    cohomology(X, k, &z);
    // leading entry of each generator in normal form
    for (size_t j = 0; j < z.c; ++j)
      for (size_t i = 0; i < z.r; ++i)
        if (!R.is_zero(z(i, j))) {
          Elem u = R.unit_normal(z(i, j));
          for (size_t t = 0; t < z.r; ++t) z(t, j) = R.mul(u, z(t, j));
          break;
        }
    return gens[k] = z;
  };
  RightApprox A;
  A.X = X;
  A.F = make_complex(X.R, X.L, [&](int k) { return g(k).c; }, [&](int k) { return zeros(R, g(k + 1).c, g(k).c); });
  A.p = make_map(A.F, X, {}, [&](int k) { return g(k); });
  Complex C = cone(A.p);
  A.Omega = shift(C, -1);
  A.q = make_map(A.Omega, A.F, {}, [&](int k) {
    Mat m = zeros(R, A.F.rank(k), A.Omega.rank(k));
    set_block(m, 0, 0, eye(R, A.F.rank(k)));
    return m;
  });
  // with q = [1, 0] the rotated cone triangle needs the third map negated
  A.omega = with_ends(neg(cone_in(A.p)), X, shift(A.Omega, 1));
  A.h.h = make_seq(R, layout_union({A.Omega.L, X.L}), [&](int k) {
    Mat m = zeros(R, X.rank(k - 1), A.Omega.rank(k));
    set_block(m, 0, A.F.rank(k), neg(R, eye(R, X.rank(k - 1))));
    return m;
  });
  return A;
}

LeftApprox left_add_approx(const Complex& X) {
  RightApprox D = right_add_approx(dual(X));
  LeftApprox L;
  L.X = X;
  L.G = dual(D.F);
  L.q = with_ends(dual_map(D.p), X, L.G);
  L.Sigma = cone(L.q);
  L.g = cone_in(L.q);
  L.r = cone_out(L.q);
  return L;
}

std::vector<RightApprox> syzygy_tower(const Complex& X, int n) {
  std::vector<RightApprox> out;
  Complex cur = X;
  for (int i = 0; i < n; ++i) {
    out.push_back(right_add_approx(cur));
    cur = out.back().Omega;
  }
  return out;
}

std::vector<LeftApprox> cosyzygy_tower(const Complex& X, int n) {
  std::vector<LeftApprox> out;
  Complex cur = X;
  for (int i = 0; i < n; ++i) {
    out.push_back(left_add_approx(cur));
    cur = out.back().Sigma;
  }
  return out;
}

Complex syzygy(const Complex& X, int n) {
  if (n <= 0) return X;
  return syzygy_tower(X, n).back().Omega;
}

Complex cosyzygy(const Complex& X, int n) {
  if (n <= 0) return X;
  return cosyzygy_tower(X, n).back().Sigma;
}

ChainMap cone_map_h(const ChainMap& f, const ChainMap& g, const ChainMap& u, const ChainMap& v, const Homotopy& H) {
  const Ring& R = *f.X.R;
  return make_map(cone(f), cone(g), {layout_shift(u.f.L, 1), v.f.L, layout_shift(H.h.L, 1)}, [&](int k) {
    Mat m = diag_blocks(R, {u.at(k + 1), v.at(k)});
    set_block(m, u.Y.rank(k + 1), 0, neg(R, H.at(f.X, g.Y, k + 1)));
    return m;
  });
}

namespace {

Homotopy must_null(const ChainMap& f, int margin, const char* what) {
  auto h = null_homotopy(f, margin);
  if (!h) fail(Err::Validation, std::string("expected a null-homotopic difference in ") + what);
  return *h;
}

}  // namespace

ChainMap omega_map(const RightApprox& AX, const RightApprox& AY, const ChainMap& a, int margin) {
  ChainMap apx = compose(a, AX.p);
  auto c = lift_through(apx, AY.p, margin);
  if (!c) fail(Err::Validation, "map out of an Add(R) object did not lift through the approximation");
  Homotopy H = must_null(sub(compose(AY.p, *c), apx), margin, "omega_map");
  ChainMap phi = cone_map_h(AX.p, AY.p, *c, a, H);
  return with_ends(shift_map(phi, -1), AX.Omega, AY.Omega);
}

bool factors_through_add(const ChainMap& f, int margin) {
  RightApprox A = right_add_approx(f.Y);
  return lift_through(f, A.p, margin).has_value();
}

bool stable_equal(const ChainMap& f, const ChainMap& g, int margin) { return factors_through_add(sub(f, g), margin); }

bool stable_iso_verify(const ChainMap& f, const ChainMap& g, int margin) {
  return stable_equal(compose(g, f), identity(f.X), margin) && stable_equal(compose(f, g), identity(f.Y), margin);
}

ChainMap transport_right(const LeftApprox& LX, const RightApprox& RY, const ChainMap& a, int margin) {
  const Ring& R = *a.X.R;
  ChainMap ag = compose(a, LX.g);
  auto c = lift_through(ag, RY.p, margin);
  if (!c) fail(Err::Validation, "map out of G_X did not lift through the right approximation");
  Homotopy H = must_null(sub(compose(RY.p, *c), ag), margin, "transport_right");
  ChainMap phi = shift_map(cone_map_h(LX.g, RY.p, *c, a, H), -1);
  const Complex& X = LX.X;
  // X -> Cone(g)[-1], x -> (-q x, x, 0)
  ChainMap iota = make_map(X, phi.X, {LX.q.f.L}, [&](int k) {
    Mat m = zeros(R, phi.X.rank(k), X.rank(k));
    set_block(m, 0, 0, neg(R, LX.q.at(k)));
    set_block(m, LX.G.rank(k), 0, eye(R, X.rank(k)));
    return m;
  });
  return with_ends(compose(phi, iota), X, RY.Omega);
}

ChainMap transport_left(const LeftApprox& LX, const RightApprox& RY, const ChainMap& b, int margin) {
  const Ring& R = *b.X.R;
  ChainMap qb = compose(RY.q, b);
  auto c = factor_through(qb, LX.q, margin);
  if (!c) fail(Err::Validation, "map into F_Y did not factor through the left approximation");
  Homotopy H = must_null(sub(qb, compose(*c, LX.q)), margin, "transport_left");
  ChainMap phi = cone_map_h(LX.q, RY.q, b, *c, H);
  const Complex& Y = RY.X;
  // Cone(q_Y) -> Y, (f', y, f) -> y - p f
  ChainMap pi = make_map(phi.Y, Y, {RY.p.f.L}, [&](int k) {
    Mat m = zeros(R, Y.rank(k), phi.Y.rank(k));
    size_t f1 = RY.F.rank(k + 1);
    set_block(m, 0, f1, eye(R, Y.rank(k)));
    set_block(m, 0, f1 + Y.rank(k), neg(R, RY.p.at(k)));
    return m;
  });
  return with_ends(compose(pi, phi), LX.Sigma, Y);
}

ChainMap counit(const RightApprox& RX, const LeftApprox& LOX, int margin) {
  return transport_left(LOX, RX, identity(RX.Omega), margin);
}

ChainMap unit(const LeftApprox& LX, const RightApprox& RSX, int margin) {
  return transport_right(LX, RSX, identity(LX.Sigma), margin);
}

SigmaOmega sigma_omega(const Complex& X, int margin) {
  SigmaOmega s{right_add_approx(X), {}, {}, std::nullopt, false};
  s.LOX = left_add_approx(s.RX.Omega);
  s.pi = counit(s.RX, s.LOX, margin);
  const Ring& R = *X.R;
  // [pi, p] : Sigma Omega X + F -> X
  ChainMap both = make_map(direct_sum({s.pi.X, s.RX.F}), X, {s.pi.f.L, s.RX.p.f.L},
                           [&](int k) { return hcat(R, {s.pi.at(k), s.RX.p.at(k)}, X.rank(k)); });
  auto l = lift_through(identity(X), both, margin);
  if (!l) return s;
  ChainMap sec = make_map(X, s.pi.X, {l->f.L}, [&](int k) { return block(l->at(k), 0, 0, s.pi.X.rank(k), X.rank(k)); });
  s.section = sec;
  s.verified = stable_iso_verify(s.pi, sec, margin);
  return s;
}

ModuleMap cohomology_map(const ChainMap& f, int k) {
  const Ring& R = *f.X.R;
  Mat zx, zy;
  PresentedModule HX = cohomology(f.X, k, &zx), HY = cohomology(f.Y, k, &zy);
  Mat img = mul(R, f.at(k), zx);
  auto y = solve(R, hcat(R, {zy, f.Y.d(k - 1)}, f.Y.rank(k)), img);
  if (!y) fail(Err::Validation, "cocycles did not map to cocycles");
  return ModuleMap{HX, HY, block(*y, 0, 0, zy.c, zx.c)};
}

ModuleMap dual_module_map(const ModuleMap& f) {
  const Ring& R = *f.src.R;
  Mat gs, gd;
  PresentedModule Ds = dual_module(f.dst, &gd);  // functionals on dst generators
  PresentedModule Dt = dual_module(f.src, &gs);
  Mat img = mul(R, transpose(f.f), gd);
  auto y = solve(R, gs, img);
  if (!y) fail(Err::Validation, "dual map did not land in the dual module");
  return ModuleMap{Ds, Dt, block(*y, 0, 0, gs.c, gd.c)};
}

// ---------------------------------------------------------------- *torsion-free and *reflexive

json StarCert::to_json() const {
  return {{"star_torsion_free", torsion_free}, {"star_reflexive", reflexive},       {"rho_injective", rho_injective},
          {"rho_bijective", rho_bijective},    {"ext1_ext2_vanish", ext12_vanish}, {"decided_on_one_period", window_certified},
          {"first_failure_degree", first_failure}};
}

StarCert star_certificate(const Complex& X) {
  StarCert c;
  PresentedModule Rm = free_module(X.R, 1);
  auto [a, b] = range_of({X.L});
  c.torsion_free = c.rho_injective = c.rho_bijective = c.ext12_vanish = true;
  c.window_certified = !X.bounded();
  bool surj = true;
  bool first = true;
  for (int i = a; i <= b + 1; ++i) {
    PresentedModule C = coker_raw(X.R, X.d(i - 1));
    bool e1 = is_zero_module(ext(C, Rm, 1));
    bool e2 = is_zero_module(ext(C, Rm, 2));
    if (!e1) c.torsion_free = false;
    if (!e1 || !e2) c.ext12_vanish = false;
    if (!e1 && first) {
      c.first_failure = i;
      first = false;
    }
  }
  for (int i = a; i <= b; ++i) {
    ModuleMap rho = rho_map(X, Rm, i);
    if (!map_is_injective(rho)) c.rho_injective = false;
    if (!map_is_surjective(rho)) surj = false;
  }
  c.rho_bijective = c.rho_injective && surj;
  c.reflexive = c.torsion_free && surj;
  return c;
}

bool is_star_torsion_free(const Complex& X) { return star_certificate(X).torsion_free; }
bool is_star_reflexive(const Complex& X) { return star_certificate(X).reflexive; }

Complex localize_complex(const Complex& X) { return localize(X); }

json VanishReport::to_json() const {
  json j = {{"hypotheses", hypotheses}, {"localized_null", localized_null}, {"null", null}, {"consistent", consistent()}};
  j["certificate"] = certificate;
  return j;
}

VanishReport generic_vanish_check(const ChainMap& f, int margin) {
  VanishReport r;
  ChainMap lf = localize_map(f);
  r.hypotheses = is_star_torsion_free(f.X) && is_add(f.Y);
  r.localized_null = null_homotopy(lf, margin).has_value();
  r.witness = null_homotopy(f, margin);
  r.null = r.witness.has_value();
  r.certificate = r.null ? homotopy_json(f.X, f.Y, *r.witness) : json(nullptr);
  return r;
}

}  // namespace stabcx
