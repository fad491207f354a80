#include "motx/grading.hpp"

#include "motx/errors.hpp"
#include "motx/fp.hpp"

#include <cmath>

namespace motx {

std::string toText(Bidegree d) {
    return "(" + std::to_string(d.p) + "," + std::to_string(d.q) + ")";
}

long long CoefficientRing::vp() const {
    long long pw = 1;
    for (int i = 0; i < n; ++i)
        pw *= l;
    return 2 * (pw - 1);
}

long long CoefficientRing::vq() const {
    long long pw = 1;
    for (int i = 0; i < n; ++i)
        pw *= l;
    return pw - 1;
}

void CoefficientRing::validate() const {
    if (!isOddPrime(l))
        throw malformedInput("coefficient prime must be an odd prime, got " + std::to_string(l));
    if (kind == RingKind::FlTauVn && n < 1)
        throw malformedInput("FlTauVn needs n >= 1; height 0 is handled by the rationalized rank check");
    if (kind == RingKind::Fl && tauInverted)
        throw malformedInput("cannot invert tau without tau");
}

CoefficientRing ringFl(int l) {
    CoefficientRing r{l, RingKind::Fl, 0, false};
    r.validate();
    return r;
}

CoefficientRing ringFlTau(int l) {
    CoefficientRing r{l, RingKind::FlTau, 0, false};
    r.validate();
    return r;
}

CoefficientRing ringFlTauVn(int l, int n) {
    CoefficientRing r{l, RingKind::FlTauVn, n, false};
    r.validate();
    return r;
}

std::string toText(const CoefficientRing& r) {
    std::string s;
    switch (r.kind) {
        case RingKind::Fl: s = "F" + std::to_string(r.l); break;
        case RingKind::FlTau: s = "F" + std::to_string(r.l) + "[tau]"; break;
        case RingKind::FlTauVn:
            s = "F" + std::to_string(r.l) + "[tau,v" + std::to_string(r.n) + "^{+-1}]";
            break;
    }
    if (r.tauInverted)
        s += "[tau^{-1}]";
    return s;
}

Scalar scalarZero() {
    return Scalar{};
}

Scalar makeScalar(const CoefficientRing& r, long long c, long long a, long long b) {
    int cc = normMod(c, r.l);
    if (cc == 0)
        return scalarZero();
    if (!r.hasTau() && a != 0)
        throw malformedInput("tau-exponent in a ring without tau");
    if (a < 0 && !r.tauInverted)
        throw malformedInput("negative tau-exponent in a non-localized ring");
    if (!r.hasV() && b != 0)
        throw malformedInput("v-exponent in a ring without v");
    return Scalar{cc, a, b};
}

Bidegree degreeOf(const CoefficientRing& r, const Scalar& x) {
    if (x.isZero())
        return {0, 0};
    return x.b * r.vDegree() + x.a * r.tauDegree();
}

bool isUnit(const CoefficientRing& r, const Scalar& x) {
    if (x.isZero())
        return false;
    return x.a == 0 || r.tauInverted;
}

Scalar mulScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y) {
    if (x.isZero() || y.isZero())
        return scalarZero();
    return Scalar{(int)((long long)x.c * y.c % r.l), x.a + y.a, x.b + y.b};
}

Scalar addScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y) {
    if (x.isZero())
        return y;
    if (y.isZero())
        return x;
    if (x.a != y.a || x.b != y.b)
        throw internalError("adding homogeneous scalars of distinct bidegrees");
    int c = normMod((long long)x.c + y.c, r.l);
    if (c == 0)
        return scalarZero();
    return Scalar{c, x.a, x.b};
}

Scalar negScalar(const CoefficientRing& r, const Scalar& x) {
    if (x.isZero())
        return x;
    return Scalar{normMod(-(long long)x.c, r.l), x.a, x.b};
}

Scalar divScalar(const CoefficientRing& r, const Scalar& x, const Scalar& y) {
    if (y.isZero())
        throw internalError("division by zero scalar");
    if (x.isZero())
        return scalarZero();
    long long a = x.a - y.a;
    if (a < 0 && !r.tauInverted)
        throw internalError("graded division with negative tau-exponent");
    return Scalar{(int)((long long)x.c * invMod(y.c, r.l) % r.l), a, x.b - y.b};
}

std::string toText(const CoefficientRing& r, const Scalar& x) {
    if (x.isZero())
        return "0";
    std::string s = std::to_string(x.c);
    if (x.a != 0)
        s += "*t^" + std::to_string(x.a);
    if (x.b != 0)
        s += "*v^" + std::to_string(x.b);
    (void)r;
    return s;
}

}  // namespace motx
