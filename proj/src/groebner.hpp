#pragma once

#include <vector>

#include "ring.hpp"

namespace stabcx {

// Column vectors over a polynomial ring, ordered position-over-term:
// a lower row index dominates.
using MVec = std::vector<MPoly>;

// Reduced, monic Groebner basis of an ideal. Pairs are processed by
// increasing degree of their lcm, ties broken by the ring order.
std::vector<MPoly> groebner_ideal(const PolyRing& R, std::vector<MPoly> gens);
MPoly normal_form(const PolyRing& R, MPoly f, const std::vector<MPoly>& G);
// Buchberger criterion check: every S-polynomial reduces to zero.
bool is_groebner(const PolyRing& R, const std::vector<MPoly>& G);

std::vector<MVec> groebner_module(const PolyRing& R, std::vector<MVec> gens);
// Lead-term reduction, stopping once the leading position reaches `stop`.
MVec top_reduce(const PolyRing& R, MVec v, const std::vector<MVec>& G, size_t stop);
// Index of the first nonzero entry, or v.size() for zero.
size_t lead_pos(const MVec& v);

}  // namespace stabcx
