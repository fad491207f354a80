#pragma once

#include "motx/grading.hpp"

#include <string>
#include <vector>

namespace motx {

// The dual Steenrod algebra at an odd prime l over the complex point:
// F_l[tau][xi_1, xi_2, ...] tensor Lambda(tau_0, tau_1, ...) with
// |xi_i| = (2l^i - 2, l^i - 1) and |tau_i| = (2l^i - 1, l^i - 1).
struct SteenrodPresentation {
    int l = 3;

    void validate() const;
    Bidegree xiDegree(int i) const;   // i >= 1
    Bidegree tauiDegree(int i) const; // i >= 0
};

// One basis monomial prod xi_i^{xi[i-1]} * prod tau_i^{bit i of tauMask}.
// tau-power coefficients live in Scalar, not here, so monomials listed by
// basis enumeration are the F_l[tau]-module basis.
struct SteenrodMonomial {
    std::vector<long long> xi;       // exponent of xi_{k+1} at index k, trailing zeros trimmed
    unsigned long long tauMask = 0;  // bit i set when tau_i divides the monomial

    bool isOne() const { return xi.empty() && tauMask == 0; }
    bool operator==(const SteenrodMonomial&) const = default;
};

SteenrodMonomial monomialOne();
SteenrodMonomial xiMonomial(int i, long long exp = 1);
SteenrodMonomial tauiMonomial(int i);

Bidegree monomialDegree(const SteenrodPresentation& pres, const SteenrodMonomial& m);

// Parity of the first degree; tau_i are odd, xi_i are even.
int monomialParity(const SteenrodMonomial& m);

// Canonical order: graded lex on (t, u, xi exponent vector, tau mask).
bool monomialLess(const SteenrodPresentation& pres, const SteenrodMonomial& a,
                  const SteenrodMonomial& b);

struct SteenrodTerm {
    int c = 0;  // nonzero mod l
    SteenrodMonomial m;

    bool operator==(const SteenrodTerm&) const = default;
};
// Sorted by monomialLess, coefficients reduced mod l, zero terms dropped.
using SteenrodPoly = std::vector<SteenrodTerm>;

struct TensorTerm {
    int c = 0;
    SteenrodMonomial left;
    SteenrodMonomial right;

    bool operator==(const TensorTerm&) const = default;
};
using TensorPoly = std::vector<TensorTerm>;

// Product of monomials. Zero when a shared tau_i squares to zero; otherwise
// the Koszul sign from merging the tau factors into ascending order.
SteenrodPoly multiplyMonomials(const SteenrodPresentation& pres, const SteenrodMonomial& a,
                               const SteenrodMonomial& b);
SteenrodPoly multiply(const SteenrodPresentation& pres, const SteenrodPoly& a,
                      const SteenrodPoly& b);
SteenrodPoly addPolys(const SteenrodPresentation& pres, const SteenrodPoly& a,
                      const SteenrodPoly& b);

TensorPoly multiplyTensor(const SteenrodPresentation& pres, const TensorPoly& a,
                          const TensorPoly& b);
TensorPoly addTensorPolys(const SteenrodPresentation& pres, const TensorPoly& a,
                          const TensorPoly& b);

// Comultiplication, extended multiplicatively from
//   D(xi_n) = sum_{i=0..n} xi_{n-i}^{l^i} (x) xi_i   (xi_0 = 1)
//   D(tau_n) = tau_n (x) 1 + sum_{i=0..n} xi_{n-i}^{l^i} (x) tau_i
// with the sign rule (a(x)b)(c(x)d) = (-1)^{p(b)p(c)} ac (x) bd.
TensorPoly comultiply(const SteenrodPresentation& pres, const SteenrodMonomial& m);

// Counit: coefficient of the unit monomial.
int counit(const SteenrodMonomial& m);

struct MonomialWindow {
    long long tMax = 0;
    long long uMin = 0;
    long long uMax = 0;
};

// Complete duplicate-free list of basis monomials with first degree <= tMax
// and weight in [uMin, uMax], sorted by monomialLess.
std::vector<SteenrodMonomial> basisInWindow(const SteenrodPresentation& pres,
                                            const MonomialWindow& w);

struct SubalgebraSpec {
    enum class Kind { LambdaQn, AN };
    Kind kind = Kind::LambdaQn;
    int index = 1;  // n for LambdaQn (n >= 0), N for AN (N >= 1)
};

// Whether m survives to the quotient (A // A_N)_*, i.e. lies in
// F_l[xi_1^{l^N}, ..., xi_N^l, xi_{N+1}, ...] (x) Lambda(tau_{N+1}, ...).
bool inQuotientByAN(const SteenrodPresentation& pres, int N, const SteenrodMonomial& m);

std::vector<SteenrodMonomial> quotientBasisInWindow(const SteenrodPresentation& pres, int N,
                                                    const MonomialWindow& w);

// Lowest first degree of a non-unit basis monomial of A // A_N, found by
// enumerating windows of doubling size.
long long connectivityOfQuotient(const SteenrodPresentation& pres, int N);

// Projection onto the quotient Hopf algebra F_l[tau][tau_n]/(tau_n^2): kills
// every monomial containing some xi_i or some tau_i with i != n.
SteenrodPoly projectToLambdaQn(const SteenrodPresentation& pres, int n, const SteenrodPoly& x);
TensorPoly projectTensorToLambdaQn(const SteenrodPresentation& pres, int n, const TensorPoly& x);

std::string toText(const SteenrodMonomial& m);
std::string toText(const SteenrodPresentation& pres, const SteenrodPoly& x);
std::string toText(const SteenrodPresentation& pres, const TensorPoly& x);

// TSV rows "monomial<TAB>p<TAB>q", one per basis element, in canonical order.
std::string basisToTsv(const SteenrodPresentation& pres,
                       const std::vector<SteenrodMonomial>& basis);

}  // namespace motx
