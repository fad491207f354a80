#pragma once

#include "motx/snf.hpp"

namespace motx {

// Free presentation rho: F1 -> F0 with coker(rho) = M. F0 has one free
// generator per generator of M, F1 one generator per torsion relation.
struct Presentation {
    GradedModule f0;
    GradedModule f1;
    HomogeneousMap rho;
};
Presentation presentation(const GradedModule& m);

struct CokernelResult {
    GradedModule module;
    HomogeneousMap projection;  // from the target of the input map
    // Lift of the cokernel generators, from the free module on the same
    // degrees (the generators may be torsion, so the lift starts there).
    HomogeneousMap section;
};

struct KernelResult {
    GradedModule module;
    HomogeneousMap inclusion;  // into the source of the input map
};

// Kernel and cokernel of a map between free modules, via diagonalization.
KernelResult freeKernel(const HomogeneousMap& f);
CokernelResult presentCokernelFree(const HomogeneousMap& f);

// Kernel and cokernel of an arbitrary map, via free presentations.
KernelResult kernel(const HomogeneousMap& f);
CokernelResult cokernel(const HomogeneousMap& f);

// Finds h with g . h = f, solving slice by slice. The first echelon solution
// is taken; callers that pass a non-injective g must accept that choice.
HomogeneousMap factorThrough(const HomogeneousMap& f, const HomogeneousMap& g);

bool isIsomorphism(const HomogeneousMap& f);

// Homology ker(outgoing)/im(incoming) at the shared middle module. The
// composite outgoing . incoming must already be zero; this is not rechecked.
GradedModule homologyAt(const HomogeneousMap& incoming, const HomogeneousMap& outgoing);

struct IdempotentImage {
    GradedModule module;
    HomogeneousMap inclusion;
    HomogeneousMap retraction;
};
// Splits off the image of a degree-zero idempotent e, with
// inclusion . retraction = e and retraction . inclusion = id.
IdempotentImage imageOfIdempotent(const HomogeneousMap& e);

// All isomorphism classes of modules E fitting 0 -> sub -> E -> quot -> 0,
// enumerated through fill-ins of the combined presentation. Throws when the
// search space exceeds maxCandidates.
std::vector<GradedModule> enumerateExtensions(const GradedModule& sub, const GradedModule& quot,
                                              size_t maxCandidates = 20000);

}  // namespace motx
