#pragma once

#include "motx/map.hpp"

namespace motx {

// Diagonalization f = U . D . V of a map between free modules. D is
// diagonal with entries t^k (times a unit v power when the ring has one),
// tau exponents non-decreasing along the diagonal. U and V are degree-zero
// isomorphisms onto re-ordered copies of the original generator lists.
struct SnfResult {
    HomogeneousMap U;     // reordered target -> target
    HomogeneousMap Uinv;  // target -> reordered target
    HomogeneousMap D;     // reordered source -> reordered target
    HomogeneousMap V;     // source -> reordered source
    HomogeneousMap Vinv;  // reordered source -> source
    int rank = 0;
    std::vector<long long> diagTauExponents;  // one per nonzero diagonal entry
};

SnfResult smithNormalForm(const HomogeneousMap& f);

}  // namespace motx
