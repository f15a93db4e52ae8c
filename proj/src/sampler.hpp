#pragma once

#include <cstdint>
#include <random>

#include "complex.hpp"

namespace stabcx {

uint64_t splitmix64(uint64_t& state);
// Seed of trial t under a run seed; stable across platforms.
uint64_t trial_seed(uint64_t seed, uint64_t t);

enum class Entries { Mixed, Small, MaxIdeal };

struct SamplerConfig {
  int min_width = 1, max_width = 4;  // number of stored degrees
  size_t max_rank = 3;
  Entries entries = Entries::Mixed;
  double periodic = 0.0;  // probability of a periodic sample
  int lo_min = -2, lo_max = 1;
};
SamplerConfig sampler_from_json(const json& j);
json sampler_json(const SamplerConfig& c);

class Sampler {
 public:
  Sampler(RingP R, uint64_t seed, SamplerConfig cfg = {});
  const RingP& ring() const { return R_; }
  std::mt19937_64& rng() { return g_; }

  Elem elem(bool max_ideal = false);
  Elem unit();
  Mat matrix(size_t r, size_t c, bool max_ideal = false);
  Mat unimodular(size_t n);

  Complex bounded();
  // Two-period complex ... -> R^r -A-> R^r -B-> R^r -> ... with AB = BA = 0,
  // either two-sided or starting at a fixed degree.
  Complex periodic();
  Complex complex();  // bounded or periodic per the config
  PresentedModule module(size_t max_gens = 3);
  // Random chain map X -> Y built from a random homotopy plus, when Y is
  // concentrated in one degree, a cocycle.
  ChainMap chain_map(const Complex& X, const Complex& Y);

 private:
  int uniform(int a, int b);
  bool coin(double p = 0.5);
  RingP R_;
  std::mt19937_64 g_;
  SamplerConfig cfg_;
  std::vector<Elem> gens_, mgens_;
};

}  // namespace stabcx
