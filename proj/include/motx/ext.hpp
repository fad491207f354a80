#pragma once

#include "motx/homalg.hpp"
#include "motx/steenrod.hpp"

#include <string>
#include <vector>

namespace motx {

// Exact fraction with normalized sign and gcd-reduced terms.
struct Rational {
    long long num = 0;
    long long den = 1;

    bool operator==(const Rational&) const = default;
};

Rational rat(long long num, long long den = 1);
Rational addRat(Rational a, Rational b);
Rational mulRat(Rational a, Rational b);
Rational negRat(Rational a);
bool ratLess(Rational a, Rational b);
std::string toText(Rational a);

// Charts claiming this line are zero wherever s > slope*(stem) + intercept.
struct VanishingLine {
    Rational slope;
    Rational intercept;
};

bool strictlyAboveLine(const VanishingLine& line, long long s, long long stem);

// Slope 1/(2(l^n-1)); holds with intercept 0 for trivial-action inputs whose
// generators sit in nonnegative degrees.
VanishingLine vanishingLineFor(int l, int n);

// Closed window: 0 <= s <= sMax, t <= tMax, |u| <= uMax. The t coordinate is
// the stem degree, in which the periodicity generator v_n sits at
// (1, 2l^n-2, l^n-1).
struct ExtWindow {
    int sMax = 0;
    long long tMax = 0;
    long long uMax = 0;

    void validate() const;
};

struct ExtResult {
    CoefficientRing ring;  // F_l[tau]
    ExtWindow window;
    std::vector<GradedModule> byS;  // cohomological degree s, generators at (t, u)
    std::vector<std::string> notes;
};

// F_l-dimension of the (t, u) slice in cohomological degree s.
long long extRank(const ExtResult& r, int s, long long t, long long u);

// Entries touching the window boundary; interior slices are exact.
bool edgeUncertain(const ExtResult& r, int s, long long t);

// Rows "s t u rank profile" for every tridegree in the window with a nonzero
// slice; profile lists the torsion of generators based at that tridegree.
std::string extToTsv(const ExtResult& r);

bool resultRespectsLine(const ExtResult& r, const VanishingLine& line);

// Module over the exterior algebra on one generator dual to tau_n: the
// underlying module is free over F_l[tau] and the action map has square zero
// and degree -(2l^n-1, l^n-1).
struct QnModule {
    int n = 1;
    GradedModule base;
    HomogeneousMap action;
};

Bidegree qnActionDegree(int l, int n);
QnModule trivialQnModule(int n, GradedModule base);
void validateQnModule(const QnModule& m);

// Ext over the exterior algebra via its two-term periodic free resolution.
// With trivial action the answer is base tensored with a polynomial class at
// (1, 2l^n-2, l^n-1); a nonzero action twists the differential, which is
// noted in the result.
ExtResult extOverLambdaQn(const QnModule& m, const ExtWindow& w);

enum class DualKind { FullDual, LambdaQnDual };

struct CobarSpec {
    SteenrodPresentation pres;
    DualKind kind = DualKind::LambdaQnDual;
    int n = 1;  // for LambdaQnDual

    void validate() const;
};

// Basis monomials of the augmentation ideal of the chosen quotient dual with
// first degree at most tBound.
std::vector<SteenrodMonomial> augIdealBasis(const CobarSpec& spec, long long tBound);

// Reduced comultiplication inside the quotient dual: project both tensor
// factors, then drop the two unit terms.
TensorPoly reducedComultiply(const CobarSpec& spec, const SteenrodMonomial& m);

// One coaction summand mono (x) x * gen of psi applied to a base generator.
struct CoactionTerm {
    SteenrodMonomial mono;
    int gen = 0;
    Scalar x;

    bool operator==(const CoactionTerm&) const = default;
};

struct Comodule {
    CobarSpec over;
    GradedModule base;  // free over F_l[tau]
    std::vector<std::vector<CoactionTerm>> coaction;  // per base generator
};

Comodule trivialComodule(const CobarSpec& spec, GradedModule base);
// Checks freeness, counit, degree-(0,0) homogeneity, quotient membership of
// every monomial, and exact coassociativity of the coaction.
void validateComodule(const Comodule& m);
// The comodule dual to a Q_n-module: psi(g) = 1 (x) g + tau_n (x) action(g).
Comodule comoduleFromQnModule(int l, const QnModule& m);

struct CobarGenerator {
    std::vector<SteenrodMonomial> bars;
    int gen = 0;
};

// Reduced cobar complex restricted to the window, extended one cohomological
// step past sMax so every reported slice has exact homology. Generators of
// C^s carry the internal bidegree (sum of bar degrees plus the base
// generator's); the differential preserves it.
struct CobarComplex {
    CoefficientRing ring;
    ExtWindow window;
    std::vector<std::vector<CobarGenerator>> basis;  // index s
    std::vector<GradedModule> modules;               // C^s, aligned with basis
    std::vector<HomogeneousMap> differentials;       // d^s: C^s -> C^{s+1}
};

CobarComplex cobarComplex(const Comodule& m, const ExtWindow& w);

// Homology of the reduced cobar complex, reported in the stem convention
// (internal degree minus s).
ExtResult cotor(const Comodule& m, const ExtWindow& w);

// The line strictly above which restriction along the quotient by the
// profile-N finite subalgebra is certified an isomorphism: the kernel term
// is connectivityOfQuotient(N)-connected, shifting the input line's
// intercept to b + slope*(1 - k(N)) + 1.
VanishingLine approximationWindow(const SteenrodPresentation& pres, Rational slope,
                                  Rational intercept, int N);

}  // namespace motx
