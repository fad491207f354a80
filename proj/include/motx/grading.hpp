#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace motx {

// (p, q) = (topological degree, motivic weight). Homology conventions
// throughout: tau sits at (0, -1), v_n at (2(l^n - 1), l^n - 1).
struct Bidegree {
    long long p = 0;
    long long q = 0;

    friend Bidegree operator+(Bidegree x, Bidegree y) { return {x.p + y.p, x.q + y.q}; }
    friend Bidegree operator-(Bidegree x, Bidegree y) { return {x.p - y.p, x.q - y.q}; }
    Bidegree operator-() const { return {-p, -q}; }
    friend Bidegree operator*(long long k, Bidegree x) { return {k * x.p, k * x.q}; }
    auto operator<=>(const Bidegree&) const = default;
};

std::string toText(Bidegree d);

enum class RingKind { Fl, FlTau, FlTauVn };

// The three graded coefficient rings, plus the tau-inverted localizations
// that show up after realization. All are graded PIDs (or graded fields),
// which is what makes the normal-form module calculus below possible.
struct CoefficientRing {
    int l = 3;
    RingKind kind = RingKind::FlTau;
    int n = 1;                 // meaningful only for FlTauVn
    bool tauInverted = false;  // localization at tau; torsion modules vanish

    bool hasTau() const { return kind != RingKind::Fl; }
    bool hasV() const { return kind == RingKind::FlTauVn; }

    long long vp() const;  // p-degree of v_n, = 2(l^n - 1)
    long long vq() const;  // q-degree of v_n, = l^n - 1
    Bidegree vDegree() const { return {vp(), vq()}; }
    Bidegree tauDegree() const { return {0, -1}; }

    void validate() const;
    bool operator==(const CoefficientRing&) const = default;
};

CoefficientRing ringFl(int l);
CoefficientRing ringFlTau(int l);
CoefficientRing ringFlTauVn(int l, int n);

std::string toText(const CoefficientRing& r);

// A homogeneous ring element c * tau^a * v^b with c in F_l. The bidegree of
// a nonzero scalar determines (a, b), so addition only ever meets equal
// exponent pairs. Zero is canonically {0,0,0}.
struct Scalar {
    int c = 0;
    long long a = 0;
    long long b = 0;

    bool isZero() const { return c == 0; }
    bool operator==(const Scalar&) const = default;
};

Scalar scalarZero();
Scalar makeScalar(const CoefficientRing& r, long long c, long long a, long long b);
Bidegree degreeOf(const CoefficientRing& r, const Scalar& x);
bool isUnit(const CoefficientRing& r, const Scalar& x);
Scalar mulScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y);
Scalar addScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y);
Scalar negScalar(const CoefficientRing& r, const Scalar& x);
// x / y for y dividing x in the graded ring (tau-exponent difference >= 0
// unless the ring is tau-inverted).
Scalar divScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y);
std::string toText(const CoefficientRing& r, const Scalar& x);

}  // namespace motx
