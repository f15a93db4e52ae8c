#include "sampler.hpp"

namespace stabcx {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t trial_seed(uint64_t seed, uint64_t t) {
  uint64_t s = seed ^ (t * 0xd1b54a32d192ed03ULL);
  splitmix64(s);
  return splitmix64(s);
}

SamplerConfig sampler_from_json(const json& j) {
  SamplerConfig c;
  if (j.is_null()) return c;
  if (j.contains("width")) {
    c.min_width = j["width"].at(0).get<int>();
    c.max_width = j["width"].at(1).get<int>();
  }
  c.max_rank = j.value("max_rank", c.max_rank);
  std::string e = j.value("entries", "mixed");
  if (e == "small")
    c.entries = Entries::Small;
  else if (e == "maximal-ideal")
    c.entries = Entries::MaxIdeal;
  else if (e == "mixed")
    c.entries = Entries::Mixed;
  else
    fail(Err::Validation, "unknown entry distribution '" + e + "'");
  if (j.contains("periodic")) {
    const json& p = j["periodic"];
    c.periodic = p.is_boolean() ? (p.get<bool>() ? 0.5 : 0.0) : p.get<double>();
  }
  if (c.min_width < 1 || c.max_width < c.min_width || c.max_rank < 1) fail(Err::Validation, "bad sampler ranges");
  return c;
}

json sampler_json(const SamplerConfig& c) {
  const char* e = c.entries == Entries::Small ? "small" : c.entries == Entries::MaxIdeal ? "maximal-ideal" : "mixed";
  return {{"width", {c.min_width, c.max_width}}, {"max_rank", c.max_rank}, {"entries", e}, {"periodic", c.periodic}};
}

Sampler::Sampler(RingP R, uint64_t seed, SamplerConfig cfg) : R_(std::move(R)), g_(seed), cfg_(cfg) {
  const Ring& r = *R_;
  switch (r.kind) {
    case Kind::Quotient: {
      auto& A = static_cast<const QuotientAlgebra&>(r);
      for (size_t i = 0; i < A.dim; ++i) {
        gens_.push_back(A.basis_elem(i));
        if (std::find(A.mbasis.begin(), A.mbasis.end(), i) != A.mbasis.end()) mgens_.push_back(A.basis_elem(i));
      }
      break;
    }
    case Kind::UnivPoly:
    case Kind::RatFunc:
    case Kind::PolyRing: {
      gens_.push_back(r.one());
      std::vector<std::string> vars;
      if (r.kind == Kind::PolyRing)
        vars = static_cast<const PolyRing&>(r).vars;
      else
        vars = {r.kind == Kind::UnivPoly ? static_cast<const UnivPolyRing&>(r).var
                                         : static_cast<const RatFuncField&>(r).var};
      for (const auto& v : vars) {
        Elem x = r.parse(v);
        gens_.push_back(x);
        mgens_.push_back(x);
        if (vars.size() == 1) {
          gens_.push_back(r.mul(x, x));
          mgens_.push_back(r.mul(x, x));
        }
      }
      break;
    }
    default:
      gens_.push_back(r.one());
      mgens_.push_back(r.from_int(r.p ? 0 : 2));
  }
  if (mgens_.empty()) mgens_.push_back(r.zero());
}

int Sampler::uniform(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g_); }
bool Sampler::coin(double p) { return std::uniform_real_distribution<double>(0, 1)(g_) < p; }

Elem Sampler::elem(bool max_ideal) {
  const Ring& r = *R_;
  if (r.kind == Kind::Integers || r.kind == Kind::Rationals) {
    int v = uniform(-3, 3);
    if (max_ideal) v *= 2;
    if (coin(0.3)) v = 0;
    return r.from_int(v);
  }
  const auto& g = max_ideal ? mgens_ : gens_;
  Elem e = r.zero();
  int span = r.p ? int(std::min<uint32_t>(r.p, 5)) - 1 : 2;
  for (const auto& b : g)
    if (coin(0.6)) e = r.add(e, r.mul(r.from_int(uniform(0, span)), b));
  return e;
}

Elem Sampler::unit() {
  const Ring& r = *R_;
  for (int t = 0; t < 50; ++t) {
    Elem e = r.kind == Kind::Integers ? r.from_int(coin() ? 1 : -1) : r.add(r.from_int(uniform(1, 4)), elem(true));
    if (r.is_unit(e)) return e;
  }
  return r.one();
}

Mat Sampler::matrix(size_t rows, size_t cols, bool max_ideal) {
  Mat A = zeros(*R_, rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t j = 0; j < cols; ++j) A(i, j) = elem(max_ideal);
  return A;
}

Mat Sampler::unimodular(size_t n) {
  const Ring& r = *R_;
  Mat U = eye(r, n);
  if (n == 0) return U;
  for (size_t i = 0; i < n; ++i) U(i, i) = unit();
  for (size_t s = 0; s < 2 * n; ++s) {
    size_t i = size_t(uniform(0, int(n) - 1)), j = size_t(uniform(0, int(n) - 1));
    if (i == j) continue;
    Elem c = elem();
    for (size_t k = 0; k < n; ++k) U(i, k) = r.add(U(i, k), r.mul(c, U(j, k)));
  }
  return U;
}

Complex Sampler::bounded() {
  const Ring& r = *R_;
  int w = uniform(cfg_.min_width, cfg_.max_width);
  int lo = uniform(cfg_.lo_min, cfg_.lo_max);
  std::vector<size_t> rk;
  for (int i = 0; i < w; ++i) rk.push_back(size_t(uniform(0, int(cfg_.max_rank))));
  std::vector<Mat> ds;
  auto mi = [&]() { return cfg_.entries == Entries::MaxIdeal || (cfg_.entries == Entries::Mixed && coin(0.4)); };
  for (int i = 0; i + 1 < w; ++i) {
    if (i == 0) {
      ds.push_back(matrix(rk[1], rk[0], mi()));
      continue;
    }
    // rows of the next differential must kill the image of the previous one
    Mat L = kernel(r, transpose(ds.back()));
    Mat C = matrix(rk[size_t(i + 1)], L.c, mi());
    ds.push_back(mul(r, C, transpose(L)));
  }
  return bounded_complex(R_, lo, rk, ds);
}

Complex Sampler::periodic() {
  const Ring& r = *R_;
  size_t n = size_t(uniform(1, int(cfg_.max_rank)));
  Mat D1 = zeros(r, n, n), D2 = zeros(r, n, n);
  for (size_t i = 0; i < n; ++i) {
    int mode = uniform(0, 3);
    if (mode == 0) {
      D1(i, i) = coin() ? r.one() : elem(true);
    } else if (mode == 1) {
      D2(i, i) = coin() ? r.one() : elem(true);
    } else {
      // a pair with ab = 0 drawn from the annihilator of a
      Elem a = elem(true);
      Mat ann = kernel(r, Mat{1, 1, {a}});
      Elem b = r.zero();
      for (size_t j = 0; j < ann.c; ++j) b = r.add(b, r.mul(elem(), ann(0, j)));
      if (mode == 3) std::swap(a, b);
      D1(i, i) = a;
      D2(i, i) = b;
    }
  }
  Mat U = unimodular(n), V = unimodular(n);
  Mat Ui = *solve(r, U, eye(r, n)), Vi = *solve(r, V, eye(r, n));
  Mat A = mul(r, U, mul(r, D1, V));
  Mat B = mul(r, Vi, mul(r, D2, Ui));
  int lo = uniform(cfg_.lo_min, cfg_.lo_max);
  Layout L{lo, lo + 1, coin(0.7) ? 2 : 0, 2};
  Complex X{R_, L, {n, n}, {A, B}};
  if (!L.lp) {
    // one-sided: nothing below lo
    return make_complex(
        R_, L, [&](int k) { return k < lo ? size_t(0) : n; },
        [&](int k) { return k < lo ? zeros(r, k + 1 < lo ? 0 : n, 0) : ((k - lo) % 2 ? B : A); });
  }
  return X;
}

Complex Sampler::complex() { return coin(cfg_.periodic) ? periodic() : bounded(); }

PresentedModule Sampler::module(size_t max_gens) {
  size_t n = size_t(uniform(1, int(max_gens))), m = size_t(uniform(0, int(max_gens)));
  bool mi = cfg_.entries == Entries::MaxIdeal || (cfg_.entries == Entries::Mixed && coin(0.5));
  return coker_raw(R_, matrix(n, m, mi));
}

ChainMap Sampler::chain_map(const Complex& X, const Complex& Y) {
  const Ring& r = *R_;
  auto gens = chain_map_generators(X, Y);
  ChainMap f = zero_map(X, Y);
  for (const auto& g : gens) {
    Elem c = elem();
    if (r.is_zero(c)) continue;
    ChainMap t = g;
    for (auto& a : t.f.v) a = scale(r, c, a);
    f = add(f, t);
  }
  return f;
}

}  // namespace stabcx
