#pragma once

#include "motx/fp.hpp"
#include "motx/module.hpp"

#include <optional>
#include <vector>

namespace motx {

struct MapEntry {
    int row = 0;  // target generator index
    int col = 0;  // source generator index
    Scalar x;

    bool operator==(const MapEntry&) const = default;
};

// A degree-d map of graded modules, stored sparsely. The scalar in entry
// (i, j) multiplies target generator i in the image of source generator j,
// so its exponents are forced: deg(x) = deg(src_j) + d - deg(tgt_i).
struct HomogeneousMap {
    GradedModule src;
    GradedModule tgt;
    Bidegree deg;
    std::vector<MapEntry> entries;  // sorted by (row, col), nonzero

    const CoefficientRing& ring() const { return src.ring; }
    Scalar at(int row, int col) const;
    bool isZero() const { return entries.empty(); }
};

// Exponents (a, b) forced on entry (row=tgt, col=src) by homogeneity, or
// nullopt when no homogeneous element of the required bidegree exists.
std::optional<std::pair<long long, long long>> forcedExponents(const CoefficientRing& r,
                                                               Bidegree srcDeg, Bidegree tgtDeg,
                                                               Bidegree mapDeg);

// Validating constructor. Reduces entries mod target torsion, checks the
// forced-exponent law and that torsion relations are respected.
HomogeneousMap makeMap(GradedModule src, GradedModule tgt, Bidegree deg,
                       std::vector<MapEntry> entries);

// Same, but entries are (row, col, coefficient) with exponents derived from
// the generator degrees; errors when the slot admits no homogeneous element.
struct CoefEntry {
    int row = 0;
    int col = 0;
    long long c = 0;
};
HomogeneousMap makeMapFromCoefs(GradedModule src, GradedModule tgt, Bidegree deg,
                                const std::vector<CoefEntry>& coefs);

HomogeneousMap zeroMap(GradedModule src, GradedModule tgt, Bidegree deg);
HomogeneousMap identityMap(const GradedModule& m);
// Multiplication by a fixed scalar, as a self map of degree deg(x).
HomogeneousMap scalarMultiple(const GradedModule& m, const Scalar& x);

HomogeneousMap compose(const HomogeneousMap& g, const HomogeneousMap& f);
HomogeneousMap addMaps(const HomogeneousMap& f, const HomogeneousMap& g);
HomogeneousMap negate(const HomogeneousMap& f);
// f^k for a self map (src and tgt agree as sorted generator lists), k >= 1.
HomogeneousMap powerMap(const HomogeneousMap& f, long long k);

bool mapsEqual(const HomogeneousMap& f, const HomogeneousMap& g);
void validateMap(const HomogeneousMap& f);

// Localization at tau: torsion generators of source and target vanish and
// the surviving entries keep their exponents (now of either sign).
HomogeneousMap invertTau(const HomogeneousMap& f);

// Dense F_l matrix of the map restricted to the slice at source bidegree d
// (target slice at d + deg). Row/column order follows sliceBasis.
FpMat sliceMatrix(const HomogeneousMap& f, Bidegree d);

std::string toText(const HomogeneousMap& f);

}  // namespace motx
