#pragma once

#include "motx/homalg.hpp"
#include "motx/serialize.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace motx {

// Cofiber-sequence calculus for AK(n)-homology of finite cell complexes,
// the tau-inversion comparison with topological K(n), and self-map
// classification. Induced maps are always supplied data, never derived
// from geometry.

// Homology of the cone on f, from 0 -> coker(f) -> C -> ker(f)[1,0] -> 0.
// The module is the resolved answer when the extension is forced (injective
// f, zero f, free quotient layer, or a unique normal form under
// enumeration); otherwise it is the associated graded sub + quot with
// `ambiguous` set and every candidate normal form listed.
struct ConeResult {
    GradedModule module;
    GradedModule sub;   // coker(f)
    GradedModule quot;  // ker(f) shifted by (1, 0)
    bool ambiguous = false;
    std::vector<GradedModule> candidates;
    std::vector<std::string> notes;
};
ConeResult coneHomology(const HomogeneousMap& f);

// Degreewise tensor with a freeness certificate on the left factor.
// Throws hypothesis-violation when x is not free.
struct KunnethResult {
    GradedModule module;
    std::vector<std::string> notes;
};
KunnethResult kunneth(const GradedModule& x, const GradedModule& y);

// Image of a module under tau-inversion with weights collapsed: the free
// generators survive, generator i landing in single degree targetDegrees[i]
// with the unit tau^{collapseExponents[i]} absorbed into the identification.
struct RealizationImage {
    GradedModule source;
    std::vector<long long> targetDegrees;
    std::vector<long long> collapseExponents;
};
RealizationImage realize(const GradedModule& m);
long long realizedDimension(const RealizationImage& r);
// Rebuilds the tau-inverted module from the collapsed data; composing with
// realize is the identity on tau-inverted modules.
GradedModule fromRealization(const RealizationImage& r);
// Kernel of the comparison M -> M[tau^{-1}]: the tau-power-torsion part.
GradedModule realizationKernel(const GradedModule& m);
// Whether the tau-inverted map is an isomorphism, the collapsed-weight
// equivalent of inverting over K(n)_*.
bool realizedIsIsomorphism(const HomogeneousMap& f);

enum class VerdictKind {
    Nilpotent,
    Isomorphism,
    UnitMultiple,
    FailsIsomorphism,
    Undetermined,
};

struct HeightVerdict {
    int m = 0;
    VerdictKind kind = VerdictKind::Undetermined;
    long long exponent = 0;  // Nilpotent: least e with f^e = 0
    long long i = 0;         // UnitMultiple: f^i = v_n^j
    long long j = 0;
    GradedModule cokernel;  // FailsIsomorphism at the critical height
    std::string note;
};

struct SelfMapReport {
    Bidegree degree;
    bool degreeIsVnMultiple = false;
    std::vector<HeightVerdict> verdicts;  // ascending height
    std::vector<std::string> notes;
};

// Classifies a supplied family of induced self maps, keyed by height m. At
// the critical height n the question is invertibility (with the power
// relation refined to a unit multiple of v_n when one exists); away from it
// the question is nilpotency, left undetermined past the exponent cap.
// Height 0 is the rationalized free-part check and is flagged approximate.
// cap = 0 means the default bound 2*l^3.
SelfMapReport classifySelfMap(const std::map<int, HomogeneousMap>& byHeight, int n,
                              long long cap = 0);

// Power relation f^i = v_n^j for an isomorphism f: reduce mod tau, find the
// order of the reduced matrix in the finite unit group, then raise to l-th
// powers until the residual dies. When no relation exists below the cap the
// first residual f^i - v_n^j is reported instead.
struct PowerRelation {
    bool found = false;
    long long i = 0;
    long long j = 0;
    std::optional<HomogeneousMap> residual;
    std::vector<std::string> notes;
};
PowerRelation powerRelation(const HomogeneousMap& f, long long cap = 0);

// Exact check of h . f^i = g^{l^m} . h for supplied exponents.
bool intertwinesAfterPowers(const HomogeneousMap& h, const HomogeneousMap& f,
                            const HomogeneousMap& g, long long i, int m);

// Finite-dimensional associative F_l-algebra given by structure constants:
// table[i][j] is the coordinate vector of e_i * e_j. validate() checks the
// prime and associativity on all basis triples.
struct FiniteAlgebra {
    int l = 3;
    int dim = 0;
    std::vector<std::vector<std::vector<int>>> table;

    void validate() const;
};

std::vector<int> algebraMul(const FiniteAlgebra& a, const std::vector<int>& x,
                            const std::vector<int>& y);
std::vector<int> algebraPower(const FiniteAlgebra& a, const std::vector<int>& x, long long k);

// Matrix of ad(x) = [x, -] in the chosen basis.
FpMat adOperator(const FiniteAlgebra& a, const std::vector<int>& x);
// Verifies ad(x^i)(b) = sum_{j=1}^{i} C(i,j) ad^j(x)(b) x^{i-j} on every
// basis element b.
bool adPowerCheck(const FiniteAlgebra& a, const std::vector<int>& x, long long i);
// Least e >= 1 with ad(x)^e = 0, or -1 when ad(x) is not nilpotent.
int adNilpotencyIndex(const FiniteAlgebra& a, const std::vector<int>& x);

std::vector<bool> vanishesAt(const GradedModule& m, const std::vector<Bidegree>& ds);

// Named cells with known AK(n)-homology, over F_l[tau][v_n^{+-1}].
GradedModule builtinCell(const std::string& name, int l, int n);
std::vector<Bidegree> builtinCellDegrees(const std::string& name, int l, int n);
// Named induced self/attaching maps: "l", "eta", "cv".
HomogeneousMap builtinMap(const std::string& name, int l, int n);

// Evaluates a cell-description program: {ring, start:[[p,q],...], steps:
// [{op:"cone",src,map} | {op:"smash",module} | {op:"split",idempotent} |
// {op:"localize"}]}. Ambiguous cone steps propagate their candidate lists.
struct CellEvalResult {
    GradedModule module;
    bool ambiguous = false;
    std::vector<GradedModule> candidates;
    std::vector<std::string> notes;
};
CellEvalResult evalCellDescription(const json& program);

std::string toText(const SelfMapReport& r);
std::string toText(const PowerRelation& r);

}  // namespace motx
