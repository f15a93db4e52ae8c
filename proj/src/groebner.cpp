#include "groebner.hpp"

#include <algorithm>
#include <tuple>

namespace stabcx {

namespace {

bool divides(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::vector<uint32_t> lcm(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

std::vector<uint32_t> quot(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  std::vector<uint32_t> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

uint64_t total(const std::vector<uint32_t>& a) {
  uint64_t s = 0;
  for (auto x : a) s += x;
  return s;
}

MPoly padd(const PolyRing& R, const MPoly& a, const MPoly& b) { return std::get<MPoly>(R.add(a, b)); }

MVec vscale(const PolyRing& R, const MVec& v, const std::vector<uint32_t>& e, uint32_t c) {
  MVec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = R.scale_mono(v[i], e, c);
  return r;
}

MVec vadd(const PolyRing& R, const MVec& a, const MVec& b) {
  MVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = padd(R, a[i], b[i]);
  return r;
}

struct Pair {
  size_t i, j;
  uint64_t deg;
  size_t pos;
  std::vector<uint32_t> l;
};

MVec spoly(const PolyRing& R, const MVec& a, const MVec& b, size_t pos, const std::vector<uint32_t>& l) {
  const Term& ta = a[pos].t[0];
  const Term& tb = b[pos].t[0];
  uint32_t p = R.p;
  MVec x = vscale(R, a, quot(l, ta.e), inv_mod(ta.c, p));
  MVec y = vscale(R, b, quot(l, tb.e), p - inv_mod(tb.c, p));
  return vadd(R, x, y);
}

}  // namespace

size_t lead_pos(const MVec& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (!v[i].t.empty()) return i;
  return v.size();
}

MVec top_reduce(const PolyRing& R, MVec v, const std::vector<MVec>& G, size_t stop) {
  uint32_t p = R.p;
  for (;;) {
    size_t lp = lead_pos(v);
    if (lp >= stop || lp == v.size()) return v;
    const Term& lt = v[lp].t[0];
    bool reduced = false;
    for (const auto& g : G) {
      if (lead_pos(g) != lp) continue;
      const Term& gt = g[lp].t[0];
      if (!divides(gt.e, lt.e)) continue;
      uint32_t c = uint32_t(uint64_t(lt.c) * inv_mod(gt.c, p) % p);
      v = vadd(R, v, vscale(R, g, quot(lt.e, gt.e), p - c));
      reduced = true;
      break;
    }
    if (!reduced) return v;
  }
}

std::vector<MVec> groebner_module(const PolyRing& R, std::vector<MVec> gens) {
  std::vector<MVec> G;
  for (auto& g : gens)
    if (lead_pos(g) < g.size()) G.push_back(std::move(g));
  std::vector<Pair> pairs;
  auto add_pairs = [&](size_t j) {
    size_t pj = lead_pos(G[j]);
    for (size_t i = 0; i < j; ++i) {
      if (lead_pos(G[i]) != pj) continue;
      auto l = lcm(G[i][pj].t[0].e, G[j][pj].t[0].e);
      pairs.push_back({i, j, total(l), pj, l});
    }
  };
  for (size_t j = 0; j < G.size(); ++j) add_pairs(j);
  while (!pairs.empty()) {
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
      if (a.deg != b.deg) return a.deg < b.deg;
      if (a.pos != b.pos) return a.pos < b.pos;
      int c = R.cmp(a.l, b.l);
      if (c != 0) return c < 0;
      return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });
    Pair pr = *best;
    pairs.erase(best);
    MVec s = spoly(R, G[pr.i], G[pr.j], pr.pos, pr.l);
    s = top_reduce(R, s, G, s.size());
    if (lead_pos(s) == s.size()) continue;
    G.push_back(std::move(s));
    add_pairs(G.size() - 1);
  }
  return G;
}

MPoly normal_form(const PolyRing& R, MPoly f, const std::vector<MPoly>& G) {
  uint32_t p = R.p;
  MPoly rem;
  while (!f.t.empty()) {
    Term lt = f.t[0];
    bool reduced = false;
    for (const auto& g : G) {
      const Term& gt = g.t[0];
      if (!divides(gt.e, lt.e)) continue;
      uint32_t c = uint32_t(uint64_t(lt.c) * inv_mod(gt.c, p) % p);
      f = padd(R, f, R.scale_mono(g, quot(lt.e, gt.e), p - c));
      reduced = true;
      break;
    }
    if (!reduced) {
      rem.t.push_back(lt);
      f.t.erase(f.t.begin());
    }
  }
  return rem;
}

std::vector<MPoly> groebner_ideal(const PolyRing& R, std::vector<MPoly> gens) {
  std::vector<MVec> mg;
  for (auto& g : gens) mg.push_back(MVec{g});
  auto G = groebner_module(R, mg);
  std::vector<MPoly> B;
  for (auto& g : G) B.push_back(g[0]);
  // drop elements whose lead term is divisible by another lead term
  std::vector<MPoly> M;
  for (size_t i = 0; i < B.size(); ++i) {
    bool redundant = false;
    for (size_t j = 0; j < B.size() && !redundant; ++j) {
      if (i == j) continue;
      const auto& a = B[j].t[0].e;
      const auto& b = B[i].t[0].e;
      if (divides(a, b) && (a != b || j < i)) redundant = true;
    }
    if (!redundant) M.push_back(B[i]);
  }
  uint32_t p = R.p;
  for (auto& g : M) {
    uint32_t il = inv_mod(g.t[0].c, p);
    g = R.scale_mono(g, std::vector<uint32_t>(R.vars.size(), 0), il);
  }
  for (size_t i = 0; i < M.size(); ++i) {
    std::vector<MPoly> others;
    for (size_t j = 0; j < M.size(); ++j)
      if (j != i) others.push_back(M[j]);
    MPoly head;
    head.t.push_back(M[i].t[0]);
    MPoly tail = M[i];
    tail.t.erase(tail.t.begin());
    M[i] = padd(R, head, normal_form(R, tail, others));
  }
  std::sort(M.begin(), M.end(), [&](const MPoly& a, const MPoly& b) { return R.cmp(a.t[0].e, b.t[0].e) < 0; });
  return M;
}

bool is_groebner(const PolyRing& R, const std::vector<MPoly>& G) {
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = i + 1; j < G.size(); ++j) {
      auto l = lcm(G[i].t[0].e, G[j].t[0].e);
      MVec s = spoly(R, MVec{G[i]}, MVec{G[j]}, 0, l);
      if (!normal_form(R, s[0], G).t.empty()) return false;
    }
  return true;
}

}  // namespace stabcx
