#pragma once

#include "motx/grading.hpp"

#include <optional>
#include <vector>

namespace motx {

// One cyclic summand: ring free on one generator when torsion == 0 (free),
// ring/(tau^k) when torsion == k >= 1.
struct Generator {
    Bidegree deg;
    long long torsion = 0;

    bool isFree() const { return torsion == 0; }
    bool operator==(const Generator&) const = default;
};

// A finitely generated graded module in normal form: a direct sum of cyclic
// summands. Over these graded PIDs every finitely presented module has this
// shape, which keeps every later computation exact.
struct GradedModule {
    CoefficientRing ring;
    std::vector<Generator> gens;

    bool isZero() const { return gens.empty(); }
    bool isFree() const;
    size_t rank() const { return gens.size(); }
    void validate() const;
};

GradedModule freeModule(const CoefficientRing& r, const std::vector<Bidegree>& degrees);
GradedModule zeroModule(const CoefficientRing& r);

// Sorts generators lexicographically by (p, q, torsionOrder), free last.
GradedModule normalized(GradedModule m);

// Shift every generator by d (suspension).
GradedModule shifted(const GradedModule& m, Bidegree d);

GradedModule directSum(const GradedModule& a, const GradedModule& b);

long long sliceDimension(const GradedModule& m, Bidegree d);

// Monomial basis of one bidegree slice: generator index plus tau/v exponents.
struct SliceMonomial {
    int gen = 0;
    long long a = 0;
    long long b = 0;
};
std::vector<SliceMonomial> sliceBasis(const GradedModule& m, Bidegree d);

struct TensorResult {
    GradedModule module;
    // False when both factors had torsion in some pair of summands, in which
    // case derived terms exist and only the degreewise tensor is returned.
    bool torFree = true;
};
TensorResult tensor(const GradedModule& a, const GradedModule& b);

GradedModule dualizeFree(const GradedModule& m);
GradedModule invertTau(const GradedModule& m);

// Generators with finite torsion order: the tau-power-torsion submodule
// (the kernel of M -> M[tau^{-1}]), reported as a module in its own right.
GradedModule tauTorsionPart(const GradedModule& m);

// Canonical comparison: multiset equality of (bidegree-orbit, torsion) where
// the orbit reduces p into [0, 2(l^n-1)) when v is invertible.
GradedModule orbitNormalized(const GradedModule& m);
bool isoEqual(const GradedModule& a, const GradedModule& b);

std::string toText(const GradedModule& m);

}  // namespace motx
