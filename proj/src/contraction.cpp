#include "contraction.hpp"

#include <map>

namespace stabcx {

namespace {

std::pair<int, int> window(const std::vector<Layout>& Ls) {
  Layout U = layout_union(Ls);
  if (U.lo > U.hi) return {0, -1};
  return {U.lo - U.lp - 1, U.hi + U.rp + 1};
}

bool zero_differential(const Complex& X) {
  auto [a, b] = window({X.L});
  for (int k = a; k <= b; ++k)
    if (!is_zero(*X.R, X.d(k))) return false;
  return true;
}

ChainMap retarget(ChainMap f, const Complex& X, const Complex& Y) {
  f.X = X;
  f.Y = Y;
  return f;
}

ChainMap scaled(const ChainMap& f, int s) { return s < 0 ? neg(f) : f; }

bool periodic_any(const std::vector<const Complex*>& xs) {
  for (auto* x : xs)
    if (!x->bounded()) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------- triangles

// b o a = 0 and ker b inside im a.
bool exact_at(const ModuleMap& a, const ModuleMap& b) {
  const Ring& R = *a.src.R;
  const PresentedModule& B = a.dst;
  const PresentedModule& C = b.dst;
  if (!in_image(R, hcat(R, {C.rel}, C.n), mul(R, b.f, a.f))) return false;
  Mat kg;
  map_kernel(b, &kg);
  return in_image(R, hcat(R, {a.f, B.rel}, B.n), kg);
}

namespace {

// Map given by its matrices in a few degrees, zero elsewhere.
ChainMap table_map(const Complex& X, const Complex& Y, const std::map<int, Mat>& t) {
  return make_map(X, Y, {}, [&](int k) {
    auto it = t.find(k);
    return it != t.end() ? it->second : zeros(*X.R, Y.rank(k), X.rank(k));
  });
}

}  // namespace

ChainMap from_cone(const ChainMap& f, const ChainMap& g, const Homotopy& H) {
  const Ring& R = *f.X.R;
  Complex C = cone(f);
  return make_map(C, g.Y, {layout_shift(f.f.L, 1), g.f.L, layout_shift(H.h.L, 1)}, [&](int k) {
    return hcat(R, {H.at(f.X, g.Y, k + 1), g.at(k)}, g.Y.rank(k));
  });
}

ChainMap into_cone_shift(const ChainMap& f, const ChainMap& g, const Homotopy& H) {
  const Ring& R = *f.X.R;
  Complex C = shift(cone(g), -1);
  return make_map(f.X, C, {f.f.L, H.h.L}, [&](int k) {
    return vcat(R, {f.at(k), neg(R, H.at(f.X, g.Y, k))}, f.X.rank(k));
  });
}

TriangleCert certify_triangle(const ChainMap& u, const ChainMap& v, const ChainMap& w, int margin) {
  TriangleCert c;
  c.window_certified = periodic_any({&u.X, &u.Y, &v.Y});
  if (!is_chain_map(u) || !is_chain_map(v) || !is_chain_map(w)) {
    c.failure = "a map is not a chain map";
    return c;
  }
  auto H = null_homotopy(compose(v, u), margin);
  if (!H) {
    c.failure = "composite of the first two maps is not null-homotopic";
    return c;
  }
  ChainMap theta = from_cone(u, v, *H);
  ChainMap out = cone_out(u);
  ChainMap wt = retarget(compose(w, theta), theta.X, out.Y);
  if (!homotopic(out, wt, margin)) {
    // change the homotopy by a chain map t : A[1] -> C so that w theta ~ out
    ChainMap E = sub(out, wt);
    auto y = factor_through(E, out, margin);
    std::optional<ChainMap> t;
    if (y) t = lift_through(retarget(*y, out.Y, out.Y), w, margin);
    if (!t) {
      c.failure = "third map does not match the cone projection";
      return c;
    }
    theta = add(theta, retarget(compose(*t, out), theta.X, theta.Y));
    if (!homotopic(out, retarget(compose(w, theta), theta.X, out.Y), margin)) {
      c.failure = "third map does not match the cone projection";
      return c;
    }
  }
  auto inv = lift_through(identity(theta.Y), theta, margin);
  if (!inv || !homotopic(retarget(compose(*inv, theta), theta.X, theta.X), identity(theta.X), margin)) {
    c.failure = "cone comparison map is not a homotopy equivalence";
    return c;
  }
  c.theta = theta;
  c.theta_inv = retarget(*inv, theta.Y, theta.X);
  c.ok = true;
  return c;
}

std::optional<ChainMap> complete_triangle(const ChainMap& u, const ChainMap& v, int margin) {
  auto H = null_homotopy(compose(v, u), margin);
  if (!H) return std::nullopt;
  ChainMap theta = from_cone(u, v, *H);
  auto inv = lift_through(identity(theta.Y), theta, margin);
  if (!inv || !homotopic(retarget(compose(*inv, theta), theta.X, theta.X), identity(theta.X), margin))
    return std::nullopt;
  ChainMap out = cone_out(u);
  return retarget(compose(out, retarget(*inv, theta.Y, theta.X)), v.Y, shift(u.X, 1));
}

// ---------------------------------------------------------------- resolutions

ChainMap PartialResolution::f(int i) const { return compose(q[size_t(i - 1)], p[size_t(i)]); }

ChainMap PartialResolution::connecting() const {
  ChainMap acc = omega[0];
  for (int i = 1; i < n; ++i) {
    ChainMap w = shift_map(omega[size_t(i)], i);
    acc = retarget(compose(w, acc), X[0], w.Y);
  }
  return acc;
}

PartialResolution build_resolution(const Complex& X, int n) {
  if (n < 1) fail(Err::Argument, "resolution length must be positive");
  PartialResolution r;
  r.n = n;
  for (const auto& A : syzygy_tower(X, n)) {
    r.X.push_back(A.X);
    r.F.push_back(A.F);
    r.q.push_back(A.q);
    r.p.push_back(A.p);
    r.omega.push_back(A.omega);
  }
  r.X.push_back(r.q.back().X);
  return r;
}

void validate_resolution(const PartialResolution& res, int margin) {
  auto bad = [](int i, const std::string& why) { fail(Err::Validation, "step " + std::to_string(i) + ": " + why); };
  if (res.n < 1 || res.X.size() != size_t(res.n + 1) || res.F.size() != size_t(res.n) ||
      res.q.size() != size_t(res.n) || res.p.size() != size_t(res.n) || res.omega.size() != size_t(res.n))
    fail(Err::Validation, "resolution arrays do not match its length");
  for (int i = 0; i < res.n; ++i) {
    if (!zero_differential(res.F[size_t(i)])) bad(i, "F has a nonzero differential");
    if (!valid_complex(res.X[size_t(i)])) bad(i, "X is not a complex");
    TriangleCert c = certify_triangle(res.q[size_t(i)], res.p[size_t(i)], res.omega[size_t(i)], margin);
    if (!c.ok) bad(i, c.failure);
  }
}

PartialResolution resolution_from_json(const json& j) {
  RingP R = ring_from_json(j.at("ring"));
  PartialResolution r;
  for (const auto& x : j.at("objects")) r.X.push_back(complex_from_json(x, R));
  for (const auto& x : j.at("add")) r.F.push_back(complex_from_json(x, R));
  r.n = int(r.F.size());
  if (r.X.size() != r.F.size() + 1) fail(Err::Validation, "need one more object than Add(R) terms");
  const auto& tr = j.at("triangles");
  if (tr.size() != r.F.size()) fail(Err::Validation, "need one triangle per Add(R) term");
  for (size_t i = 0; i < tr.size(); ++i) {
    r.q.push_back(map_from_json(tr[i].at("q"), r.X[i + 1], r.F[i]));
    r.p.push_back(map_from_json(tr[i].at("p"), r.F[i], r.X[i]));
    r.omega.push_back(map_from_json(tr[i].at("omega"), r.X[i], shift(r.X[i + 1], 1)));
  }
  return r;
}

json resolution_json(const PartialResolution& res) {
  json j;
  j["ring"] = res.X[0].R->to_json();
  j["objects"] = json::array();
  j["add"] = json::array();
  j["triangles"] = json::array();
  for (const auto& x : res.X) j["objects"].push_back(complex_json(x));
  for (const auto& x : res.F) j["add"].push_back(complex_json(x));
  for (int i = 0; i < res.n; ++i)
    j["triangles"].push_back({{"q", map_json(res.q[size_t(i)])},
                              {"p", map_json(res.p[size_t(i)])},
                              {"omega", map_json(res.omega[size_t(i)])}});
  return j;
}

namespace {

PartialResolution complete_all(PartialResolution r) {
  for (int i = 0; i < r.n; ++i) {
    auto w = complete_triangle(r.q[size_t(i)], r.p[size_t(i)]);
    if (!w) fail(Err::Validation, "step " + std::to_string(i) + " does not complete to a triangle");
    r.omega.push_back(retarget(*w, r.X[size_t(i)], shift(r.X[size_t(i + 1)], 1)));
  }
  return r;
}

}  // namespace

PartialResolution two_term_resolution(const FreeResolution& P, int n) {
  if (n < 1 || P.maps.size() < size_t(n + 1)) fail(Err::Argument, "free resolution too short");
  RingP Rp = P.R;
  const Ring& R = *Rp;
  auto rk = [&](int i) { return P.ranks[size_t(i)]; };
  auto u = [&](int i) { return P.maps[size_t(i - 1)]; };  // P_i -> P_{i-1}
  auto two = [&](size_t r1, size_t r0, const Mat& d) { return bounded_complex(Rp, -1, {r1, r0}, {d}); };
  PartialResolution r;
  r.n = n;
  for (int i = 0; i <= n; ++i) r.X.push_back(two(rk(i + 1), rk(i), u(i + 1)));
  for (int i = 0; i < n; ++i) r.F.push_back(two(rk(i + 2), rk(i), zeros(R, rk(i), rk(i + 2))));
  for (int i = 0; i < n; ++i) {
    const Complex &Xi = r.X[size_t(i)], &Xn = r.X[size_t(i + 1)], &Fi = r.F[size_t(i)];
    r.p.push_back(table_map(Fi, Xi, {{0, eye(R, rk(i))}, {-1, u(i + 2)}}));
    r.q.push_back(table_map(Xn, Fi, {{0, u(i + 1)}, {-1, eye(R, rk(i + 2))}}));
  }
  return complete_all(r);
}

PartialResolution nzd_resolution(RingP Rp, const Elem& a) {
  const Ring& R = *Rp;
  Mat A{1, 1, {a}};
  Complex R0 = free_in_degree(Rp, 1, 0), R1 = free_in_degree(Rp, 1, -1);
  Complex X1 = bounded_complex(Rp, -1, {1, 1}, {A});
  PartialResolution r;
  r.n = 3;
  r.X = {R1, X1, R0, zero_complex(Rp)};
  r.F = {R1, R0, R0};
  r.q.push_back(table_map(X1, R1, {{-1, eye(R, 1)}}));
  r.p.push_back(table_map(R1, R1, {{-1, A}}));
  r.q.push_back(table_map(R0, R0, {{0, A}}));
  r.p.push_back(table_map(R0, X1, {{0, eye(R, 1)}}));
  r.q.push_back(zero_map(r.X[3], R0));
  r.p.push_back(identity(R0));
  return complete_all(r);
}

// ---------------------------------------------------------------- contraction

size_t Contraction::offset(int i, int k) const {
  size_t o = 0;
  for (int j = n - 1; j > i; --j) o += parts[size_t(j)].rank(k);
  return o;
}

Mat Contraction::block(const Mat& m, int j, int kr, int i, int kc) const {
  return stabcx::block(m, offset(j, kr), offset(i, kc), parts[size_t(j)].rank(kr), parts[size_t(i)].rank(kc));
}

ChainMap Contraction::in(int i) const {
  const Ring& R = *Ft.R;
  const Complex& P = parts[size_t(i)];
  return make_map(P, Ft, {}, [&](int k) {
    Mat m = zeros(R, Ft.rank(k), P.rank(k));
    set_block(m, offset(i, k), 0, eye(R, P.rank(k)));
    return m;
  });
}

ChainMap Contraction::pr(int i) const {
  const Ring& R = *Ft.R;
  const Complex& P = parts[size_t(i)];
  return make_map(Ft, P, {}, [&](int k) {
    Mat m = zeros(R, P.rank(k), Ft.rank(k));
    set_block(m, 0, offset(i, k), eye(R, P.rank(k)));
    return m;
  });
}

namespace {

// H with v u = dH + Hd read off a certified theta = [H, v] : Cone(u) -> C.
Homotopy cert_homotopy(const TriangleCert& c, const ChainMap& u) {
  const ChainMap& th = *c.theta;
  Homotopy H;
  H.h = make_seq(*th.Y.R, layout_union({u.X.L, th.Y.L}), [&](int j) {
    return stabcx::block(th.at(j - 1), 0, 0, th.Y.rank(j - 1), u.X.rank(j));
  });
  H.window_certified = c.window_certified;
  return H;
}

// (psi, phi, s omega) for s = 1 or -1.
TriangleCert certify_signed(const ChainMap& psi, const ChainMap& phi, const ChainMap& omega, int margin, int* sign) {
  ChainMap w = retarget(omega, phi.Y, shift(psi.X, 1));
  TriangleCert c;
  for (int s : {1, -1}) {
    c = certify_triangle(psi, phi, scaled(w, s), margin);
    if (c.ok) {
      *sign = s;
      return c;
    }
  }
  *sign = 0;
  return c;
}

void certify_cone(Contraction& C, int margin) { C.cone_cert = certify_signed(C.psi, C.phi, C.omega_t, margin, &C.cone_sign); }

}  // namespace

Contraction contract(const PartialResolution& res, int margin) {
  Contraction C;
  C.n = res.n;
  const Ring& R = *res.X[0].R;
  for (int i = 0; i < res.n; ++i) C.parts.push_back(shift(res.F[size_t(i)], i));
  auto step_cert = [&](int i) {
    TriangleCert c = certify_triangle(res.q[size_t(i)], res.p[size_t(i)], res.omega[size_t(i)], margin);
    if (!c.ok && c.window_certified)
      fail(Err::Unsupported, "step " + std::to_string(i) + ": no periodic comparison map on the truncated window");
    if (!c.ok) fail(Err::Validation, "step " + std::to_string(i) + ": " + c.failure);
    return c;
  };
  TriangleCert c0 = step_cert(0);
  C.stages.push_back({res.F[0], res.q[0], res.p[0], {}});
  ChainMap wt = res.omega[0];
  Homotopy Hprev = cert_homotopy(c0, res.q[0]);  // phi psi = dH + Hd for the current stage
  int sign = 1;
  TriangleCert cert = c0;
  for (int m = 2; m <= res.n; ++m) {
    const Contraction::Stage prev = C.stages.back();
    int s0 = m - 1;
    ChainMap pm = shift_map(res.p[size_t(s0)], m - 2);
    ChainMap alpha = retarget(compose(prev.psi, pm), pm.X, prev.Ft);
    Complex Ft = cone(alpha);
    // X_m[m-1] -> Cone(p) -> Cone(alpha) from the certified homotopy of p q
    Homotopy Hq = cert_homotopy(step_cert(s0), res.q[size_t(s0)]);
    const Complex& Xm = res.X[size_t(m)];
    const Complex& Xp = res.X[size_t(s0)];
    ChainMap a = shift_map(res.q[size_t(s0)], m - 1);
    std::optional<ChainMap> psi;
    for (int s : {-1, 1}) {
      ChainMap cand = make_map(a.X, Ft, {a.f.L, layout_shift(Hq.h.L, m - 1)}, [&](int k) {
        Mat K = mul(R, prev.psi.at(k), Hq.at(Xm, Xp, k + m - 1));
        return vcat(R, {a.at(k), s < 0 ? neg(R, K) : K}, a.X.rank(k));
      });
      if (is_chain_map(cand)) {
        psi = cand;
        break;
      }
    }
    if (!psi) fail(Err::Validation, "no comparison map into the cone at length " + std::to_string(m));
    // phi = theta_prev o (Cone(alpha) -> Cone(psi_prev)), i.e. homotopy H_prev p
    Homotopy Hphi;
    Hphi.h = make_seq(R, layout_union({pm.X.L, Hprev.h.L}), [&](int k) {
      return mul(R, Hprev.at(prev.psi.X, prev.phi.Y, k), pm.at(k));
    });
    ChainMap phi = from_cone(alpha, prev.phi, Hphi);
    if (!is_chain_map(phi)) fail(Err::Validation, "cone projection is not a chain map at length " + std::to_string(m));
    ChainMap w = shift_map(res.omega[size_t(s0)], s0);
    wt = retarget(compose(w, wt), res.X[0], w.Y);
    C.stages.push_back({Ft, *psi, phi, alpha});
    cert = certify_signed(*psi, phi, wt, margin, &sign);
    if (!cert.ok) fail(Err::Validation, "contracted triangle of length " + std::to_string(m) + ": " + cert.failure);
    Hprev = cert_homotopy(cert, *psi);
  }
  C.Ft = C.stages.back().Ft;
  C.psi = C.stages.back().psi;
  C.phi = C.stages.back().phi;
  C.omega_t = res.connecting();
  C.cone_sign = sign;
  C.cone_cert = cert;
  return C;
}

json BlockReport::to_json() const {
  return {{"lower", lower},           {"subdiagonal", subdiagonal}, {"psi_corner", psi_corner},
          {"phi_corner", phi_corner}, {"block_zero", block_zero},   {"ok", ok()}};
}

BlockReport check_blocks(const Contraction& C, const PartialResolution& res) {
  const Ring& R = *C.Ft.R;
  BlockReport b{true, true, true, true, true};
  auto [lo, hi] = window({C.Ft.L, C.psi.X.L, C.phi.Y.L});
  std::vector<ChainMap> fs(static_cast<size_t>(C.n));
  for (int i = 1; i < C.n; ++i) fs[size_t(i)] = res.f(i);
  for (int k = lo; k <= hi; ++k) {
    Mat d = C.Ft.d(k);
    for (int i = 0; i < C.n; ++i)
      for (int j = 0; j < C.n; ++j) {
        Mat blk = C.block(d, j, k + 1, i, k);
        bool z = is_zero(R, blk);
        if (i <= j && !z) b.lower = false;
        if (j == i - 1 && !equal(R, blk, fs[size_t(i)].at(k + i))) b.subdiagonal = false;
        if (j != i - 1 && !z) b.block_zero = false;
      }
    Mat ps = C.psi.at(k);
    size_t top = C.parts[size_t(C.n - 1)].rank(k);
    if (!equal(R, stabcx::block(ps, 0, 0, top, ps.c), res.q[size_t(C.n - 1)].at(k + C.n - 1))) b.psi_corner = false;
    Mat ph = C.phi.at(k);
    if (!equal(R, stabcx::block(ph, 0, C.offset(0, k), ph.r, C.parts[0].rank(k)), res.p[0].at(k)))
      b.phi_corner = false;
  }
  return b;
}

bool cohomology_sequence_exact(const Contraction& C) {
  auto [lo, hi] = window({C.Ft.L, C.psi.X.L, C.phi.Y.L});
  for (int k = lo; k <= hi; ++k) {
    ModuleMap a = cohomology_map(C.psi, k), b = cohomology_map(C.phi, k);
    if (!map_is_injective(a) || !map_is_surjective(b) || !exact_at(a, b)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- classification

std::string degeneracy_name(Degeneracy d) {
  switch (d) {
    case Degeneracy::Witnessed:
      return "degenerate";
    case Degeneracy::NotForConstruction:
      return "not-degenerate-for-construction";
    default:
      return "unknown";
  }
}

json Classification::to_json() const {
  json j = {{"split", split}, {"degenerate", degeneracy_name(degenerate)}, {"degenerate_how", degenerate_how}};
  j["generically_split"] = generically_split ? json(*generically_split) : json(nullptr);
  return j;
}

std::optional<ChainMap> degenerate_conjugation(const Contraction& C, const PartialResolution& res) {
  (void)res;
  if (!C.Ft.bounded() || C.Ft.L.lo > C.Ft.L.hi) return std::nullopt;
  RingP Rp = C.Ft.R;
  const Ring& R = *Rp;
  int lo = C.Ft.L.lo, hi = C.Ft.L.hi;
  auto ddeg = [&](int k) {
    Mat d = C.Ft.d(k);
    Mat out = zeros(R, d.r, d.c);
    for (int i = 1; i < C.n; ++i) {
      Mat blk = C.block(d, i - 1, k + 1, i, k);
      set_block(out, C.offset(i - 1, k + 1), C.offset(i, k), blk);
    }
    return out;
  };
  // free entries of N^k: row in block j, column in block i, j < i
  std::vector<std::vector<std::pair<size_t, size_t>>> prm(size_t(hi - lo + 1));
  for (int k = lo; k <= hi; ++k)
    for (int i = 0; i < C.n; ++i)
      for (int j = 0; j < i; ++j)
        for (size_t c = 0; c < C.parts[size_t(i)].rank(k); ++c)
          for (size_t r = 0; r < C.parts[size_t(j)].rank(k); ++r)
            prm[size_t(k - lo)].push_back({C.offset(j, k) + r, C.offset(i, k) + c});
  auto P = [&](int k) -> const std::vector<std::pair<size_t, size_t>>& { return prm[size_t(k - lo)]; };
  BandSystem S;
  S.a = lo;
  S.b = hi;
  S.e0 = lo;
  S.e1 = hi;
  S.usize = [&](int k) { return P(k).size(); };
  S.A = [&](int k) {
    Mat d = C.Ft.d(k);
    size_t rows = C.Ft.rank(k + 1), cols = C.Ft.rank(k);
    Mat A = zeros(R, rows * cols, P(k).size());
    for (size_t t = 0; t < P(k).size(); ++t) {
      auto [r, c] = P(k)[t];
      for (size_t x = 0; x < rows; ++x) A(c * rows + x, t) = d(x, r);
    }
    return A;
  };
  S.B = [&](int k) {
    Mat dd = ddeg(k);
    size_t rows = C.Ft.rank(k + 1), cols = C.Ft.rank(k);
    Mat B = zeros(R, rows * cols, P(k + 1).size());
    for (size_t t = 0; t < P(k + 1).size(); ++t) {
      auto [r, c] = P(k + 1)[t];
      for (size_t y = 0; y < cols; ++y) B(y * rows + r, t) = R.neg(dd(c, y));
    }
    return B;
  };
  S.c = [&](int k) { return vec(sub(R, ddeg(k), C.Ft.d(k))); };
  auto u = solve_band(R, S);
  if (!u) return std::nullopt;
  Complex D = make_complex(Rp, C.Ft.L, [&](int k) { return C.Ft.rank(k); }, ddeg);
  ChainMap theta = make_map(D, C.Ft, {}, [&](int k) {
    Mat m = eye(R, C.Ft.rank(k));
    if (k < lo || k > hi) return m;
    const Mat& x = (*u)[size_t(k - lo)];
    for (size_t t = 0; t < P(k).size(); ++t) m(P(k)[t].first, P(k)[t].second) = x(t, 0);
    return m;
  });
  if (!is_chain_map(theta)) return std::nullopt;
  return theta;
}

Classification classify(const PartialResolution& res, int margin) { return classify(res, contract(res, margin), margin); }

Classification classify(const PartialResolution& res, const Contraction& C, int margin) {
  Classification c;
  c.split = true;
  for (const auto& w : res.omega)
    if (!null_homotopy(w, margin)) c.split = false;
  if (res.n <= 2) {
    c.degenerate = Degeneracy::Witnessed;
    c.degenerate_how = "length at most two";
  } else if (check_blocks(C, res).block_zero) {
    c.degenerate = Degeneracy::Witnessed;
    c.degenerate_how = "constructed differential";
  } else {
    bool lemma = false;
    try {
      lemma = graded_exact_degenerate(res, margin).cone_sign != 0;
    } catch (const StabError& e) {
      if (e.code != Err::Precondition) throw;
    }
    if (lemma) {
      c.degenerate = Degeneracy::Witnessed;
      c.degenerate_how = "graded-exact lemma";
    } else if (!C.Ft.bounded()) {
      c.degenerate = Degeneracy::Unknown;
      c.degenerate_how = "periodic contraction, no conjugation search";
    } else if (degenerate_conjugation(C, res)) {
      c.degenerate = Degeneracy::Witnessed;
      c.degenerate_how = "unipotent conjugation";
    } else {
      c.degenerate = Degeneracy::NotForConstruction;
      c.degenerate_how = "no unipotent conjugation of the constructed differential";
    }
  }
  if (res.X[0].R->fraction_ring()) {
    bool g = true;
    for (const auto& w : res.omega)
      if (!null_homotopy(localize_map(w), margin)) g = false;
    c.generically_split = g;
  }
  return c;
}

Contraction graded_exact_degenerate(const PartialResolution& res, int margin) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) fail(Err::Precondition, "hypothesis failed: " + what);
  };
  const int n = res.n;
  RingP Rp = res.X[0].R;
  const Ring& R = *Rp;
  need(zero_differential(res.X[0]), "X_0 in Add(R) without null summands");
  need(zero_differential(res.X[size_t(n)]), "X_n in Add(R) without null summands");
  for (const auto& F : res.F) need(zero_differential(F), "F_i in Add(R) without null summands");
  // 0 -> X_n -> F_{n-1} -> ... -> F_0 -> X_0 -> 0 exact as graded modules
  std::vector<ChainMap> seq{res.q[size_t(n - 1)]};
  for (int i = n - 1; i >= 1; --i) seq.push_back(res.f(i));
  seq.push_back(res.p[0]);
  std::vector<Layout> Ls;
  for (const auto& m : seq) Ls.push_back(m.f.L);
  for (const auto& F : res.F) Ls.push_back(F.L);
  auto [lo, hi] = window(Ls);
  for (int k = lo; k <= hi; ++k) {
    for (size_t t = 0; t <= seq.size(); ++t) {
      // exactness at the source of seq[t] (t = seq.size() means at X_0)
      Mat out = t < seq.size() ? seq[t].at(k) : zeros(R, 0, seq.back().Y.rank(k));
      Mat inc = t > 0 ? seq[t - 1].at(k) : zeros(R, out.c, 0);
      if (!is_zero(R, mul(R, out, inc)) || !in_image(R, inc, kernel(R, out)))
        need(false, "graded sequence exact in degree " + std::to_string(k));
    }
  }
  Contraction C;
  C.n = n;
  for (int i = 0; i < n; ++i) C.parts.push_back(shift(res.F[size_t(i)], i));
  std::vector<Layout> PL;
  for (const auto& P : C.parts) PL.push_back(P.L);
  Layout U = layout_union(PL);
  auto rank = [&](int k) {
    size_t s = 0;
    for (const auto& P : C.parts) s += P.rank(k);
    return s;
  };
  std::vector<ChainMap> fs(static_cast<size_t>(n));
  for (int i = 1; i < n; ++i) fs[size_t(i)] = res.f(i);
  C.Ft = make_complex(Rp, U, rank, [&](int k) {
    Mat d = zeros(R, rank(k + 1), rank(k));
    for (int i = 1; i < n; ++i) set_block(d, C.offset(i - 1, k + 1), C.offset(i, k), fs[size_t(i)].at(k + i));
    return d;
  });
  ChainMap qn = shift_map(res.q[size_t(n - 1)], n - 1);
  C.psi = make_map(qn.X, C.Ft, {qn.f.L}, [&](int k) {
    Mat m = zeros(R, C.Ft.rank(k), qn.X.rank(k));
    set_block(m, 0, 0, qn.at(k));
    return m;
  });
  C.phi = make_map(C.Ft, res.X[0], {res.p[0].f.L}, [&](int k) {
    Mat m = zeros(R, res.X[0].rank(k), C.Ft.rank(k));
    set_block(m, 0, C.offset(0, k), res.p[0].at(k));
    return m;
  });
  if (!is_chain_map(C.psi) || !is_chain_map(C.phi)) fail(Err::Validation, "degenerate triangle maps are not chain maps");
  C.omega_t = res.connecting();
  certify_cone(C, margin);
  return C;
}

StrandSum strand_coproduct(const PartialResolution& res, const Contraction& D) {
  const int n = res.n;
  std::vector<Layout> Ls;
  for (const auto& F : res.F) Ls.push_back(F.L);
  Layout U = layout_union(Ls);
  if (!U.bounded()) fail(Err::Unsupported, "strand decomposition needs bounded Add(R) terms");
  RingP Rp = D.Ft.R;
  const Ring& R = *Rp;
  std::vector<ChainMap> fs(static_cast<size_t>(n));
  for (int i = 1; i < n; ++i) fs[size_t(i)] = res.f(i);
  StrandSum out;
  std::vector<Complex> strands;
  std::vector<int> ks;
  for (int k = U.lo; k <= U.hi; ++k) {
    std::vector<size_t> rk;
    std::vector<Mat> ds;
    for (int j = n - 1; j >= 0; --j) {
      rk.push_back(res.F[size_t(j)].rank(k));
      if (j > 0) ds.push_back(fs[size_t(j)].at(k));
    }
    strands.push_back(bounded_complex(Rp, k - n + 1, rk, ds));
    ks.push_back(k);
  }
  out.sum = direct_sum(strands);
  // F_j^k sits in strand k at degree k - j, and in Ft at the same degree
  out.iso = make_map(out.sum, D.Ft, {}, [&](int m) {
    Mat P = zeros(R, D.Ft.rank(m), out.sum.rank(m));
    size_t col = 0;
    for (size_t s = 0; s < strands.size(); ++s) {
      int k = ks[s];
      size_t sr = strands[s].rank(m);
      int j = k - m;
      if (sr && j >= 0 && j < n) set_block(P, D.offset(j, m), col, eye(R, sr));
      col += sr;
    }
    return P;
  });
  out.verified = is_chain_map(out.iso);
  auto [lo, hi] = window({out.sum.L, D.Ft.L});
  for (int m = lo; m <= hi && out.verified; ++m) {
    Mat P = out.iso.at(m);
    if (P.r != P.c || !solve(R, P, eye(R, P.r))) out.verified = false;
  }
  return out;
}

// ---------------------------------------------------------------- morphisms

void validate_ladder(const ResolutionMap& m, int margin) {
  const auto &T = m.top, &B = m.bottom;
  if (T.n != B.n || m.t.size() != size_t(T.n + 1) || m.s.size() != size_t(T.n))
    fail(Err::Validation, "ladder sizes do not match");
  for (int i = 0; i < T.n; ++i) {
    size_t u = size_t(i);
    auto bad = [&](const char* sq) { fail(Err::Validation, "ladder square '" + std::string(sq) + "' fails at step " + std::to_string(i)); };
    if (!homotopic(compose(T.p[u], m.s[u]), compose(m.t[u], B.p[u]), margin)) bad("p");
    if (!homotopic(compose(T.q[u], m.t[u + 1]), compose(m.s[u], B.q[u]), margin)) bad("q");
    ChainMap lhs = compose(T.omega[u], m.t[u]);
    ChainMap rhs = retarget(compose(shift_map(m.t[u + 1], 1), B.omega[u]), lhs.X, lhs.Y);
    if (!homotopic(lhs, rhs, margin)) bad("omega");
  }
}

json ContractedMap::to_json() const {
  return {{"lower_triangular", lower_triangular}, {"diagonal", diagonal}, {"pr_square", pr_square},
          {"psi_square", psi_square},             {"phi_square", phi_square}};
}

ContractedMap contract_morphism(const ResolutionMap& m, const Contraction& top, const Contraction& bottom, int margin) {
  validate_ladder(m, margin);
  const int n = top.n;
  const Ring& R = *top.Ft.R;
  ChainMap st = m.s[0];
  for (int k = 2; k <= n; ++k) {
    const auto &SF = top.stages[size_t(k - 1)], &SG = bottom.stages[size_t(k - 1)];
    ChainMap sh = shift_map(m.s[size_t(k - 1)], k - 2);
    ChainMap D = sub(compose(SF.alpha, sh), retarget(compose(st, SG.alpha), sh.X, SF.alpha.Y));
    auto H = null_homotopy(D, margin);
    if (!H) fail(Err::Validation, "contracted ladder does not commute at length " + std::to_string(k - 1));
    st = retarget(cone_map_h(SG.alpha, SF.alpha, sh, st, *H), SG.Ft, SF.Ft);
  }
  ContractedMap out;
  out.st = st;
  out.lower_triangular = out.diagonal = true;
  auto [lo, hi] = window({top.Ft.L, bottom.Ft.L, st.f.L});
  for (int k = lo; k <= hi; ++k) {
    Mat s = st.at(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Mat blk = stabcx::block(s, top.offset(j, k), bottom.offset(i, k), top.parts[size_t(j)].rank(k),
                                bottom.parts[size_t(i)].rank(k));
        if (j > i && !is_zero(R, blk)) out.lower_triangular = false;
        if (j == i && !equal(R, blk, m.s[size_t(i)].at(k + i))) out.diagonal = false;
      }
  }
  out.pr_square = equal_map(compose(top.pr(n - 1), st),
                            retarget(compose(shift_map(m.s[size_t(n - 1)], n - 1), bottom.pr(n - 1)), st.X,
                                     top.parts[size_t(n - 1)]));
  ChainMap tn = shift_map(m.t[size_t(n)], n - 1);
  out.psi_square = homotopic(compose(st, bottom.psi), retarget(compose(top.psi, tn), bottom.psi.X, top.Ft), margin);
  out.phi_square = homotopic(compose(top.phi, st), retarget(compose(m.t[0], bottom.phi), bottom.Ft, top.phi.Y), margin);
  return out;
}

// ---------------------------------------------------------------- pr_{n-1}

json PrNullReport::to_json() const {
  json j = {{"left_inverse", left_inverse}, {"witness_ok", witness_ok}, {"null", null}, {"witness", witness}};
  j["localized_left_inverse"] = localized_left_inverse ? json(*localized_left_inverse) : json(nullptr);
  j["localized_null"] = localized_null ? json(*localized_null) : json(nullptr);
  return j;
}

PrNullReport pr_null_check(const PartialResolution& res, const Contraction& C, int margin) {
  if (res.n < 2) fail(Err::Argument, "pr check needs length at least two");
  const int n = res.n;
  const Ring& R = *C.Ft.R;
  PrNullReport r;
  ChainMap f = res.f(n - 1);  // F_{n-1} -> F_{n-2}
  ChainMap pr = C.pr(n - 1);
  auto [lo, hi] = window({f.f.L, res.F[size_t(n - 1)].L, res.F[size_t(n - 2)].L});
  auto left_inv = [&](const Ring& S, const std::function<Mat(int)>& fk, std::map<int, Mat>* out) {
    for (int k = lo; k <= hi; ++k) {
      Mat a = fk(k);
      auto v = solve(S, transpose(a), eye(S, a.c));
      if (!v) return false;
      if (out) (*out)[k] = transpose(*v);
    }
    return true;
  };
  std::map<int, Mat> v;
  r.left_inverse = left_inv(R, [&](int k) { return f.at(k); }, &v);
  if (r.left_inverse) {
    Homotopy h;
    auto [a, b] = window({C.Ft.L});
    h.h = make_seq(R, Layout{a, b, 0, 0}, [&](int j) {
      Mat m = zeros(R, C.parts[size_t(n - 1)].rank(j - 1), C.Ft.rank(j));
      int deg = j + n - 2;
      auto it = v.find(deg);
      if (it != v.end() && it->second.r && it->second.c) set_block(m, 0, C.offset(n - 2, j), it->second);
      return m;
    });
    h.window_certified = !C.Ft.bounded();
    r.witness_ok = check_homotopy(pr, h, margin);
    r.witness = homotopy_json(pr.X, pr.Y, h);
  }
  r.null = null_homotopy(pr, margin).has_value();
  RingP Q = R.fraction_ring();
  if (Q) {
    ChainMap lf = localize_map(f);
    r.localized_left_inverse = left_inv(*Q, [&](int k) { return lf.at(k); }, nullptr);
    r.localized_null = null_homotopy(localize_map(pr), margin).has_value();
  }
  return r;
}

}  // namespace stabcx
