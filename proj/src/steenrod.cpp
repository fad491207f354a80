#include "motx/steenrod.hpp"

#include "motx/errors.hpp"
#include "motx/fp.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace motx {

namespace {

long long powLL(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > (1LL << 55) / base) {
            throw internalError("exponent overflow in power computation");
        }
        r *= base;
    }
    return r;
}

std::vector<long long> trimmed(std::vector<long long> xi) {
    while (!xi.empty() && xi.back() == 0) xi.pop_back();
    return xi;
}

struct MonoLess {
    const SteenrodPresentation* pres;
    bool operator()(const SteenrodMonomial& a, const SteenrodMonomial& b) const {
        return monomialLess(*pres, a, b);
    }
};

struct TensorKey {
    SteenrodMonomial left;
    SteenrodMonomial right;
    bool operator==(const TensorKey&) const = default;
};

struct TensorLess {
    const SteenrodPresentation* pres;
    bool operator()(const TensorKey& a, const TensorKey& b) const {
        if (!(a.left == b.left)) return monomialLess(*pres, a.left, b.left);
        return monomialLess(*pres, a.right, b.right);
    }
};

using PolyAcc = std::map<SteenrodMonomial, int, MonoLess>;
using TensorAcc = std::map<TensorKey, int, TensorLess>;

void addInto(PolyAcc& acc, int l, const SteenrodMonomial& m, int c) {
    int& slot = acc[m];
    slot = normMod(slot + c, l);
}

void addInto(TensorAcc& acc, int l, const SteenrodMonomial& a, const SteenrodMonomial& b, int c) {
    int& slot = acc[TensorKey{a, b}];
    slot = normMod(slot + c, l);
}

SteenrodPoly flush(PolyAcc& acc) {
    SteenrodPoly out;
    for (const auto& [m, c] : acc) {
        if (c != 0) out.push_back({c, m});
    }
    return out;
}

TensorPoly flush(TensorAcc& acc) {
    TensorPoly out;
    for (const auto& [k, c] : acc) {
        if (c != 0) out.push_back({c, k.left, k.right});
    }
    return out;
}

// Sign of merging the tau factors of a before those of b into ascending
// order: one transposition per pair (i in a, j in b) with i > j.
int mergeSign(unsigned long long a, unsigned long long b) {
    int inversions = 0;
    for (int i = 1; i < 64; ++i) {
        if (a & (1ULL << i)) {
            inversions += std::popcount(b & ((1ULL << i) - 1));
        }
    }
    return (inversions & 1) ? -1 : 1;
}

TensorPoly deltaXi(const SteenrodPresentation& pres, int n) {
    TensorPoly out;
    for (int i = 0; i <= n; ++i) {
        SteenrodMonomial left = (i == n) ? monomialOne() : xiMonomial(n - i, powLL(pres.l, i));
        SteenrodMonomial right = (i == 0) ? monomialOne() : xiMonomial(i);
        out.push_back({1, left, right});
    }
    return out;
}

TensorPoly deltaTaui(const SteenrodPresentation& pres, int n) {
    TensorPoly out;
    out.push_back({1, tauiMonomial(n), monomialOne()});
    for (int i = 0; i <= n; ++i) {
        SteenrodMonomial left = (i == n) ? monomialOne() : xiMonomial(n - i, powLL(pres.l, i));
        out.push_back({1, left, tauiMonomial(i)});
    }
    return out;
}

}  // namespace

void SteenrodPresentation::validate() const {
    if (!isOddPrime(l)) {
        throw malformedInput("dual Steenrod presentation needs an odd prime");
    }
}

Bidegree SteenrodPresentation::xiDegree(int i) const {
    if (i < 1) throw malformedInput("xi index must be at least 1");
    long long q = powLL(l, i) - 1;
    return {2 * q, q};
}

Bidegree SteenrodPresentation::tauiDegree(int i) const {
    if (i < 0) throw malformedInput("tau index must be at least 0");
    long long q = powLL(l, i) - 1;
    return {2 * q + 1, q};
}

SteenrodMonomial monomialOne() { return {}; }

SteenrodMonomial xiMonomial(int i, long long exp) {
    if (i < 1) throw malformedInput("xi index must be at least 1");
    if (exp < 0) throw malformedInput("xi exponent must be nonnegative");
    SteenrodMonomial m;
    if (exp > 0) {
        m.xi.assign(static_cast<size_t>(i), 0);
        m.xi[static_cast<size_t>(i) - 1] = exp;
    }
    return m;
}

SteenrodMonomial tauiMonomial(int i) {
    if (i < 0 || i >= 63) throw malformedInput("tau index out of range");
    SteenrodMonomial m;
    m.tauMask = 1ULL << i;
    return m;
}

Bidegree monomialDegree(const SteenrodPresentation& pres, const SteenrodMonomial& m) {
    Bidegree d{0, 0};
    for (size_t k = 0; k < m.xi.size(); ++k) {
        if (m.xi[k] != 0) d = d + m.xi[k] * pres.xiDegree(static_cast<int>(k) + 1);
    }
    for (int i = 0; i < 63; ++i) {
        if (m.tauMask & (1ULL << i)) d = d + pres.tauiDegree(i);
    }
    return d;
}

int monomialParity(const SteenrodMonomial& m) { return std::popcount(m.tauMask) & 1; }

bool monomialLess(const SteenrodPresentation& pres, const SteenrodMonomial& a,
                  const SteenrodMonomial& b) {
    Bidegree da = monomialDegree(pres, a);
    Bidegree db = monomialDegree(pres, b);
    if (da.p != db.p) return da.p < db.p;
    if (da.q != db.q) return da.q < db.q;
    size_t n = std::max(a.xi.size(), b.xi.size());
    for (size_t k = 0; k < n; ++k) {
        long long ea = k < a.xi.size() ? a.xi[k] : 0;
        long long eb = k < b.xi.size() ? b.xi[k] : 0;
        if (ea != eb) return ea < eb;
    }
    return a.tauMask < b.tauMask;
}

SteenrodPoly multiplyMonomials(const SteenrodPresentation& pres, const SteenrodMonomial& a,
                               const SteenrodMonomial& b) {
    if (a.tauMask & b.tauMask) return {};
    SteenrodMonomial m;
    m.xi.assign(std::max(a.xi.size(), b.xi.size()), 0);
    for (size_t k = 0; k < m.xi.size(); ++k) {
        m.xi[k] = (k < a.xi.size() ? a.xi[k] : 0) + (k < b.xi.size() ? b.xi[k] : 0);
    }
    m.xi = trimmed(std::move(m.xi));
    m.tauMask = a.tauMask | b.tauMask;
    int c = normMod(mergeSign(a.tauMask, b.tauMask), pres.l);
    return {{c, m}};
}

SteenrodPoly multiply(const SteenrodPresentation& pres, const SteenrodPoly& a,
                      const SteenrodPoly& b) {
    PolyAcc acc{MonoLess{&pres}};
    for (const auto& ta : a) {
        for (const auto& tb : b) {
            for (const auto& t : multiplyMonomials(pres, ta.m, tb.m)) {
                addInto(acc, pres.l, t.m, normMod(static_cast<long long>(ta.c) * tb.c * t.c, pres.l));
            }
        }
    }
    return flush(acc);
}

SteenrodPoly addPolys(const SteenrodPresentation& pres, const SteenrodPoly& a,
                      const SteenrodPoly& b) {
    PolyAcc acc{MonoLess{&pres}};
    for (const auto& t : a) addInto(acc, pres.l, t.m, t.c);
    for (const auto& t : b) addInto(acc, pres.l, t.m, t.c);
    return flush(acc);
}

TensorPoly multiplyTensor(const SteenrodPresentation& pres, const TensorPoly& a,
                          const TensorPoly& b) {
    TensorAcc acc{TensorLess{&pres}};
    for (const auto& ta : a) {
        for (const auto& tb : b) {
            int koszul = (monomialParity(ta.right) && monomialParity(tb.left)) ? -1 : 1;
            for (const auto& lt : multiplyMonomials(pres, ta.left, tb.left)) {
                for (const auto& rt : multiplyMonomials(pres, ta.right, tb.right)) {
                    long long c = static_cast<long long>(ta.c) * tb.c * koszul * lt.c * rt.c;
                    addInto(acc, pres.l, lt.m, rt.m, normMod(c, pres.l));
                }
            }
        }
    }
    return flush(acc);
}

TensorPoly addTensorPolys(const SteenrodPresentation& pres, const TensorPoly& a,
                          const TensorPoly& b) {
    TensorAcc acc{TensorLess{&pres}};
    for (const auto& t : a) addInto(acc, pres.l, t.left, t.right, t.c);
    for (const auto& t : b) addInto(acc, pres.l, t.left, t.right, t.c);
    return flush(acc);
}

TensorPoly comultiply(const SteenrodPresentation& pres, const SteenrodMonomial& m) {
    pres.validate();
    TensorPoly out{{1, monomialOne(), monomialOne()}};
    for (size_t k = 0; k < m.xi.size(); ++k) {
        if (m.xi[k] == 0) continue;
        TensorPoly d = deltaXi(pres, static_cast<int>(k) + 1);
        for (long long e = 0; e < m.xi[k]; ++e) out = multiplyTensor(pres, out, d);
    }
    for (int i = 0; i < 63; ++i) {
        if (m.tauMask & (1ULL << i)) out = multiplyTensor(pres, out, deltaTaui(pres, i));
    }
    return out;
}

int counit(const SteenrodMonomial& m) { return m.isOne() ? 1 : 0; }

namespace {

void enumerateFrom(const SteenrodPresentation& pres,
                   const std::vector<std::pair<int, long long>>& xiGens,
                   const std::vector<std::pair<int, long long>>& tauGens, size_t idx,
                   long long budget, SteenrodMonomial cur, std::vector<SteenrodMonomial>& out) {
    if (idx == xiGens.size() + tauGens.size()) {
        out.push_back(cur);
        return;
    }
    if (idx < xiGens.size()) {
        auto [i, p] = xiGens[idx];
        for (long long e = 0; e * p <= budget; ++e) {
            SteenrodMonomial next = cur;
            if (e > 0) {
                if (next.xi.size() < static_cast<size_t>(i)) next.xi.resize(static_cast<size_t>(i), 0);
                next.xi[static_cast<size_t>(i) - 1] = e;
            }
            enumerateFrom(pres, xiGens, tauGens, idx + 1, budget - e * p, next, out);
        }
    } else {
        auto [i, p] = tauGens[idx - xiGens.size()];
        enumerateFrom(pres, xiGens, tauGens, idx + 1, budget, cur, out);
        if (p <= budget) {
            SteenrodMonomial next = cur;
            next.tauMask |= 1ULL << i;
            enumerateFrom(pres, xiGens, tauGens, idx + 1, budget - p, next, out);
        }
    }
}

}  // namespace

std::vector<SteenrodMonomial> basisInWindow(const SteenrodPresentation& pres,
                                            const MonomialWindow& w) {
    pres.validate();
    if (w.tMax < 0) throw malformedInput("basis window needs a nonnegative degree bound");
    std::vector<std::pair<int, long long>> xiGens;
    for (int i = 1;; ++i) {
        long long p = pres.xiDegree(i).p;
        if (p > w.tMax) break;
        xiGens.push_back({i, p});
    }
    std::vector<std::pair<int, long long>> tauGens;
    for (int i = 0;; ++i) {
        long long p = pres.tauiDegree(i).p;
        if (p > w.tMax) break;
        tauGens.push_back({i, p});
    }
    std::vector<SteenrodMonomial> all;
    enumerateFrom(pres, xiGens, tauGens, 0, w.tMax, monomialOne(), all);
    std::vector<SteenrodMonomial> out;
    for (auto& m : all) {
        long long u = monomialDegree(pres, m).q;
        if (u >= w.uMin && u <= w.uMax) out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(),
              [&](const SteenrodMonomial& a, const SteenrodMonomial& b) {
                  return monomialLess(pres, a, b);
              });
    return out;
}

bool inQuotientByAN(const SteenrodPresentation& pres, int N, const SteenrodMonomial& m) {
    if (N < 1) throw malformedInput("subalgebra index must be at least 1");
    if (m.tauMask & ((1ULL << (N + 1)) - 1)) return false;
    for (int j = 1; j <= N && static_cast<size_t>(j) <= m.xi.size(); ++j) {
        if (m.xi[static_cast<size_t>(j) - 1] % powLL(pres.l, N + 1 - j) != 0) return false;
    }
    return true;
}

std::vector<SteenrodMonomial> quotientBasisInWindow(const SteenrodPresentation& pres, int N,
                                                    const MonomialWindow& w) {
    std::vector<SteenrodMonomial> out;
    for (auto& m : basisInWindow(pres, w)) {
        if (inQuotientByAN(pres, N, m)) out.push_back(std::move(m));
    }
    return out;
}

long long connectivityOfQuotient(const SteenrodPresentation& pres, int N) {
    for (long long cap = 8; cap <= (1LL << 24); cap *= 2) {
        long long best = -1;
        for (const auto& m : quotientBasisInWindow(pres, N, {cap, 0, cap})) {
            if (m.isOne()) continue;
            long long p = monomialDegree(pres, m).p;
            if (best < 0 || p < best) best = p;
        }
        if (best >= 0) return best;
    }
    throw internalError("quotient augmentation ideal not found in any window");
}

SteenrodPoly projectToLambdaQn(const SteenrodPresentation& pres, int n, const SteenrodPoly& x) {
    if (n < 0 || n >= 63) throw malformedInput("tau index out of range");
    PolyAcc acc{MonoLess{&pres}};
    for (const auto& t : x) {
        if (!t.m.xi.empty()) continue;
        if (t.m.tauMask & ~(1ULL << n)) continue;
        addInto(acc, pres.l, t.m, t.c);
    }
    return flush(acc);
}

TensorPoly projectTensorToLambdaQn(const SteenrodPresentation& pres, int n, const TensorPoly& x) {
    auto survives = [&](const SteenrodMonomial& m) {
        return m.xi.empty() && (m.tauMask & ~(1ULL << n)) == 0;
    };
    TensorAcc acc{TensorLess{&pres}};
    for (const auto& t : x) {
        if (survives(t.left) && survives(t.right)) addInto(acc, pres.l, t.left, t.right, t.c);
    }
    return flush(acc);
}

std::string toText(const SteenrodMonomial& m) {
    if (m.isOne()) return "1";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < m.xi.size(); ++k) {
        if (m.xi[k] == 0) continue;
        if (!first) os << "*";
        os << "xi" << (k + 1);
        if (m.xi[k] > 1) os << "^" << m.xi[k];
        first = false;
    }
    for (int i = 0; i < 63; ++i) {
        if (m.tauMask & (1ULL << i)) {
            if (!first) os << "*";
            os << "tau" << i;
            first = false;
        }
    }
    return os.str();
}

namespace {

std::string termText(int c, const std::string& mono) {
    if (mono == "1") return std::to_string(c);
    if (c == 1) return mono;
    return std::to_string(c) + "*" + mono;
}

}  // namespace

std::string toText(const SteenrodPresentation&, const SteenrodPoly& x) {
    if (x.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) out += " + ";
        out += termText(x[i].c, toText(x[i].m));
    }
    return out;
}

std::string toText(const SteenrodPresentation&, const TensorPoly& x) {
    if (x.empty()) return "0";
    std::string out;
    for (size_t i = 0; i < x.size(); ++i) {
        if (i) out += " + ";
        std::string mono = toText(x[i].left) + " (x) " + toText(x[i].right);
        if (x[i].c != 1) mono = std::to_string(x[i].c) + "*[" + mono + "]";
        out += mono;
    }
    return out;
}

std::string basisToTsv(const SteenrodPresentation& pres,
                       const std::vector<SteenrodMonomial>& basis) {
    std::ostringstream os;
    for (const auto& m : basis) {
        Bidegree d = monomialDegree(pres, m);
        os << toText(m) << "\t" << d.p << "\t" << d.q << "\n";
    }
    return os.str();
}

}  // namespace motx
