#pragma once

#include <vector>

#include "treesmith/automorphism.hpp"
#include "treesmith/words.hpp"

namespace treesmith {

// All Whitehead automorphisms of the second kind: pick a multiplier letter m
// and, for every other generator y, one of y, y*m, m^-1*y, m^-1*y*m.
// Length-preserving ones (permutations, inversions) are not needed for the
// descent and are omitted.
std::vector<Automorphism> whitehead_automorphisms(const Basis& basis);

int cyclic_length(const Word& w);

// Greedy length descent under Whitehead automorphisms. A conjugacy class is
// primitive iff the descent bottoms out at cyclic length 1.
bool is_primitive(const Basis& basis, const ConjClass& c);
bool is_primitive(const Basis& basis, const Word& w);

}  // namespace treesmith
