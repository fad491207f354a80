#include "motx/ext.hpp"

#include "motx/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace motx {

Rational rat(long long num, long long den) {
    if (den == 0) throw malformedInput("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {num, den};
}

Rational addRat(Rational a, Rational b) { return rat(a.num * b.den + b.num * a.den, a.den * b.den); }

Rational mulRat(Rational a, Rational b) { return rat(a.num * b.num, a.den * b.den); }

Rational negRat(Rational a) { return {-a.num, a.den}; }

bool ratLess(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

std::string toText(Rational a) {
    if (a.den == 1) return std::to_string(a.num);
    return std::to_string(a.num) + "/" + std::to_string(a.den);
}

bool strictlyAboveLine(const VanishingLine& line, long long s, long long stem) {
    // s > m*stem + b with everything over the common positive denominator.
    long long lhs = s * line.slope.den * line.intercept.den;
    long long rhs = line.slope.num * stem * line.intercept.den + line.intercept.num * line.slope.den;
    return lhs > rhs;
}

VanishingLine vanishingLineFor(int l, int n) {
    if (!isOddPrime(l)) throw malformedInput("vanishing line needs an odd prime");
    if (n < 1) throw malformedInput("vanishing line needs a height of at least 1");
    long long pw = 1;
    for (int i = 0; i < n; ++i) pw *= l;
    return {rat(1, 2 * (pw - 1)), rat(0)};
}

void ExtWindow::validate() const {
    if (sMax < 0 || tMax < 0 || uMax < 0) throw malformedInput("window must be nonempty");
}

long long extRank(const ExtResult& r, int s, long long t, long long u) {
    if (s < 0 || static_cast<size_t>(s) >= r.byS.size()) return 0;
    return sliceDimension(r.byS[static_cast<size_t>(s)], {t, u});
}

bool edgeUncertain(const ExtResult& r, int s, long long t) {
    return s == r.window.sMax || t == r.window.tMax;
}

std::string extToTsv(const ExtResult& r) {
    long long tLo = 0;
    for (const auto& m : r.byS) {
        for (const auto& g : m.gens) tLo = std::min(tLo, g.deg.p);
    }
    std::ostringstream os;
    for (int s = 0; static_cast<size_t>(s) < r.byS.size(); ++s) {
        const GradedModule& m = r.byS[static_cast<size_t>(s)];
        for (long long t = tLo; t <= r.window.tMax; ++t) {
            for (long long u = -r.window.uMax; u <= r.window.uMax; ++u) {
                long long rank = sliceDimension(m, {t, u});
                if (rank == 0) continue;
                std::string profile;
                for (const auto& g : m.gens) {
                    if (!(g.deg == Bidegree{t, u})) continue;
                    if (!profile.empty()) profile += ",";
                    profile += g.isFree() ? "free" : "tau^" + std::to_string(g.torsion);
                }
                if (profile.empty()) profile = "-";
                os << s << "\t" << t << "\t" << u << "\t" << rank << "\t" << profile << "\n";
            }
        }
    }
    return os.str();
}

bool resultRespectsLine(const ExtResult& r, const VanishingLine& line) {
    for (int s = 0; static_cast<size_t>(s) < r.byS.size(); ++s) {
        for (const auto& g : r.byS[static_cast<size_t>(s)].gens) {
            if (strictlyAboveLine(line, s, g.deg.p)) return false;
        }
    }
    return true;
}

namespace {

bool sameUnderlying(const GradedModule& a, const GradedModule& b) {
    return a.ring == b.ring && a.gens == b.gens;
}

}  // namespace

Bidegree qnActionDegree(int l, int n) {
    long long pw = 1;
    for (int i = 0; i < n; ++i) pw *= l;
    return {-(2 * pw - 1), -(pw - 1)};
}

QnModule trivialQnModule(int n, GradedModule base) {
    Bidegree d = qnActionDegree(base.ring.l, n);
    HomogeneousMap z = zeroMap(base, base, d);
    return {n, std::move(base), std::move(z)};
}

void validateQnModule(const QnModule& m) {
    m.base.validate();
    if (m.n < 0) throw malformedInput("exterior generator index must be nonnegative");
    if (m.base.ring.kind != RingKind::FlTau || m.base.ring.tauInverted) {
        throw malformedInput("exterior-algebra modules live over F_l[tau]");
    }
    if (!m.base.isFree()) throw hypothesisViolation("module must be free over F_l[tau]");
    if (!sameUnderlying(m.action.src, m.base) || !sameUnderlying(m.action.tgt, m.base)) {
        throw malformedInput("action endpoints must both be the underlying module");
    }
    if (!(m.action.deg == qnActionDegree(m.base.ring.l, m.n))) {
        throw malformedInput("action map has the wrong degree");
    }
    if (!compose(m.action, m.action).isZero()) {
        throw malformedInput("action map must square to zero");
    }
}

namespace {

GradedModule restrictToTMax(const GradedModule& m, long long tMax) {
    GradedModule out = zeroModule(m.ring);
    for (const auto& g : m.gens) {
        if (g.deg.p <= tMax) out.gens.push_back(g);
    }
    return normalized(std::move(out));
}

}  // namespace

ExtResult extOverLambdaQn(const QnModule& m, const ExtWindow& w) {
    validateQnModule(m);
    w.validate();
    int l = m.base.ring.l;
    long long pw = 1;
    for (int i = 0; i < m.n; ++i) pw *= l;
    Bidegree vShift{2 * (pw - 1), pw - 1};

    ExtResult out;
    out.ring = m.base.ring;
    out.window = w;
    if (m.action.isZero()) {
        for (int s = 0; s <= w.sMax; ++s) {
            out.byS.push_back(restrictToTMax(shifted(m.base, s * vShift), w.tMax));
        }
        return out;
    }

    out.notes.push_back("nonzero action: homology of the twisted periodic complex");
    GradedModule h0 = kernel(m.action).module;
    GradedModule hs = homologyAt(m.action, m.action);
    for (int s = 0; s <= w.sMax; ++s) {
        const GradedModule& h = (s == 0) ? h0 : hs;
        out.byS.push_back(restrictToTMax(shifted(h, s * vShift), w.tMax));
    }
    return out;
}

void CobarSpec::validate() const {
    pres.validate();
    if (kind == DualKind::LambdaQnDual && (n < 0 || n >= 63)) {
        throw malformedInput("exterior generator index out of range");
    }
}

std::vector<SteenrodMonomial> augIdealBasis(const CobarSpec& spec, long long tBound) {
    spec.validate();
    if (tBound < 0) return {};
    if (spec.kind == DualKind::LambdaQnDual) {
        if (spec.pres.tauiDegree(spec.n).p <= tBound) return {tauiMonomial(spec.n)};
        return {};
    }
    std::vector<SteenrodMonomial> out;
    for (auto& m : basisInWindow(spec.pres, {tBound, 0, tBound})) {
        if (!m.isOne()) out.push_back(std::move(m));
    }
    return out;
}

TensorPoly reducedComultiply(const CobarSpec& spec, const SteenrodMonomial& m) {
    TensorPoly full = comultiply(spec.pres, m);
    if (spec.kind == DualKind::LambdaQnDual) {
        full = projectTensorToLambdaQn(spec.pres, spec.n, full);
    }
    TensorPoly out;
    for (auto& t : full) {
        if (t.left.isOne() || t.right.isOne()) continue;
        out.push_back(std::move(t));
    }
    return out;
}

Comodule trivialComodule(const CobarSpec& spec, GradedModule base) {
    Comodule out{spec, std::move(base), {}};
    out.coaction.resize(out.base.gens.size());
    for (size_t j = 0; j < out.base.gens.size(); ++j) {
        out.coaction[j] = {{monomialOne(), static_cast<int>(j), Scalar{1, 0, 0}}};
    }
    return out;
}

namespace {

bool monomialInDual(const CobarSpec& spec, const SteenrodMonomial& m) {
    if (spec.kind == DualKind::FullDual) return true;
    return m.xi.empty() && (m.tauMask & ~(1ULL << spec.n)) == 0;
}

}  // namespace

void validateComodule(const Comodule& m) {
    m.over.validate();
    m.base.validate();
    const CoefficientRing& r = m.base.ring;
    if (r.kind != RingKind::FlTau || r.tauInverted || r.l != m.over.pres.l) {
        throw malformedInput("comodule base must be F_l[tau] at the presentation prime");
    }
    if (!m.base.isFree()) throw hypothesisViolation("comodule must be free over F_l[tau]");
    if (m.coaction.size() != m.base.gens.size()) {
        throw malformedInput("coaction must list one term set per generator");
    }
    for (size_t j = 0; j < m.coaction.size(); ++j) {
        Bidegree dj = m.base.gens[j].deg;
        int unitTerms = 0;
        for (const auto& t : m.coaction[j]) {
            if (t.gen < 0 || static_cast<size_t>(t.gen) >= m.base.gens.size()) {
                throw malformedInput("coaction generator index out of range");
            }
            if (!monomialInDual(m.over, t.mono)) {
                throw malformedInput("coaction monomial lies outside the quotient dual");
            }
            if (t.x.c <= 0 || t.x.c >= m.over.pres.l || t.x.a < 0 || t.x.b != 0) {
                throw malformedInput("coaction coefficient is not a reduced F_l[tau] scalar");
            }
            Bidegree total = monomialDegree(m.over.pres, t.mono) + degreeOf(r, t.x) +
                             m.base.gens[static_cast<size_t>(t.gen)].deg;
            if (!(total == dj)) throw malformedInput("coaction term is not degree preserving");
            if (t.mono.isOne()) {
                ++unitTerms;
                if (t.gen != static_cast<int>(j) || t.x.c != 1 || t.x.a != 0) {
                    throw malformedInput("coaction is not counital");
                }
            }
        }
        if (unitTerms != 1) throw malformedInput("coaction is not counital");
    }

    // Exact coassociativity: (Delta (x) 1) psi = (1 (x) psi) psi on each
    // generator, with terms keyed by (monomial, monomial, generator).
    for (size_t j = 0; j < m.coaction.size(); ++j) {
        std::map<std::tuple<std::string, std::string, int>, std::pair<int, long long>> lhs, rhs;
        auto add = [&](auto& acc, const SteenrodMonomial& m1, const SteenrodMonomial& m2, int gen,
                       int c, long long a) {
            auto key = std::make_tuple(toText(m1), toText(m2), gen);
            auto it = acc.find(key);
            if (it == acc.end()) {
                int cc = normMod(c, m.over.pres.l);
                if (cc != 0) acc[key] = {cc, a};
                return;
            }
            if (it->second.second != a) throw internalError("coassociativity terms disagree in weight");
            it->second.first = normMod(it->second.first + c, m.over.pres.l);
            if (it->second.first == 0) acc.erase(it);
        };
        for (const auto& t : m.coaction[j]) {
            TensorPoly d = comultiply(m.over.pres, t.mono);
            if (m.over.kind == DualKind::LambdaQnDual) {
                d = projectTensorToLambdaQn(m.over.pres, m.over.n, d);
            }
            for (const auto& dt : d) add(lhs, dt.left, dt.right, t.gen, dt.c * t.x.c, t.x.a);
            for (const auto& inner : m.coaction[static_cast<size_t>(t.gen)]) {
                add(rhs, t.mono, inner.mono, inner.gen, t.x.c * inner.x.c, t.x.a + inner.x.a);
            }
        }
        if (lhs != rhs) throw malformedInput("coaction is not coassociative");
    }
}

Comodule comoduleFromQnModule(int l, const QnModule& m) {
    validateQnModule(m);
    if (m.base.ring.l != l) throw malformedInput("prime mismatch between module and presentation");
    CobarSpec spec{SteenrodPresentation{l}, DualKind::LambdaQnDual, m.n};
    Comodule out = trivialComodule(spec, m.base);
    for (const auto& e : m.action.entries) {
        out.coaction[static_cast<size_t>(e.col)].push_back({tauiMonomial(m.n), e.row, e.x});
    }
    return out;
}

namespace {

struct CobarKey {
    std::vector<std::string> bars;
    int gen;
    bool operator<(const CobarKey& o) const {
        if (bars != o.bars) return bars < o.bars;
        return gen < o.gen;
    }
};

CobarKey keyOf(const CobarGenerator& g) {
    CobarKey k;
    for (const auto& b : g.bars) k.bars.push_back(toText(b));
    k.gen = g.gen;
    return k;
}

Bidegree cobarDegree(const Comodule& m, const CobarGenerator& g) {
    Bidegree d = m.base.gens[static_cast<size_t>(g.gen)].deg;
    for (const auto& b : g.bars) d = d + monomialDegree(m.over.pres, b);
    return d;
}

void buildBars(const std::vector<std::pair<SteenrodMonomial, long long>>& aug, int slots,
               long long budget, std::vector<SteenrodMonomial>& cur,
               std::vector<std::vector<SteenrodMonomial>>& out) {
    if (budget < 0) return;
    if (slots == 0) {
        out.push_back(cur);
        return;
    }
    for (const auto& [mono, p] : aug) {
        if (p > budget - (slots - 1)) continue;  // every remaining slot needs degree >= 1
        cur.push_back(mono);
        buildBars(aug, slots - 1, budget - p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

CobarComplex cobarComplex(const Comodule& m, const ExtWindow& w) {
    validateComodule(m);
    w.validate();

    CobarComplex cc;
    cc.ring = m.base.ring;
    cc.window = w;

    long long minGenT = 0;
    for (const auto& g : m.base.gens) minGenT = std::min(minGenT, g.deg.p);
    std::vector<std::pair<SteenrodMonomial, long long>> aug;
    for (auto& mono : augIdealBasis(m.over, w.tMax + w.sMax - minGenT)) {
        long long p = monomialDegree(m.over.pres, mono).p;
        aug.push_back({std::move(mono), p});
    }

    int sTop = w.sMax + 1;
    for (int s = 0; s <= sTop; ++s) {
        long long tBound = w.tMax + std::min<long long>(s, w.sMax);
        std::vector<CobarGenerator> gens;
        for (size_t j = 0; j < m.base.gens.size(); ++j) {
            std::vector<std::vector<SteenrodMonomial>> barLists;
            std::vector<SteenrodMonomial> cur;
            buildBars(aug, s, tBound - m.base.gens[j].deg.p, cur, barLists);
            for (auto& bars : barLists) gens.push_back({std::move(bars), static_cast<int>(j)});
        }
        std::sort(gens.begin(), gens.end(), [&](const CobarGenerator& a, const CobarGenerator& b) {
            return keyOf(a) < keyOf(b);
        });
        GradedModule mod = zeroModule(cc.ring);
        for (const auto& g : gens) mod.gens.push_back({cobarDegree(m, g), 0});
        cc.basis.push_back(std::move(gens));
        cc.modules.push_back(std::move(mod));
    }

    for (int s = 0; s < sTop; ++s) {
        const auto& srcBasis = cc.basis[static_cast<size_t>(s)];
        const auto& tgtBasis = cc.basis[static_cast<size_t>(s) + 1];
        std::map<CobarKey, int> tgtIndex;
        for (size_t i = 0; i < tgtBasis.size(); ++i) tgtIndex[keyOf(tgtBasis[i])] = static_cast<int>(i);

        std::map<std::pair<int, int>, Scalar> acc;
        auto emit = [&](const CobarGenerator& tgt, int col, Scalar x) {
            if (x.c == 0) return;
            auto it = tgtIndex.find(keyOf(tgt));
            if (it == tgtIndex.end()) throw internalError("cobar differential left the window");
            auto key = std::make_pair(it->second, col);
            auto slot = acc.find(key);
            if (slot == acc.end()) {
                acc[key] = x;
            } else {
                slot->second = addScalar(cc.ring, slot->second, x);
            }
        };

        for (size_t col = 0; col < srcBasis.size(); ++col) {
            const CobarGenerator& src = srcBasis[col];
            for (int i = 1; i <= s; ++i) {
                int sign = (i % 2 == 1) ? -1 : 1;
                for (const auto& t : reducedComultiply(m.over, src.bars[static_cast<size_t>(i) - 1])) {
                    CobarGenerator tgt;
                    tgt.gen = src.gen;
                    tgt.bars.assign(src.bars.begin(), src.bars.begin() + (i - 1));
                    tgt.bars.push_back(t.left);
                    tgt.bars.push_back(t.right);
                    tgt.bars.insert(tgt.bars.end(), src.bars.begin() + i, src.bars.end());
                    emit(tgt, static_cast<int>(col),
                         Scalar{normMod(sign * t.c, cc.ring.l), 0, 0});
                }
            }
            int sign = ((s + 1) % 2 == 1) ? -1 : 1;
            for (const auto& t : m.coaction[static_cast<size_t>(src.gen)]) {
                if (t.mono.isOne()) continue;
                CobarGenerator tgt;
                tgt.gen = t.gen;
                tgt.bars = src.bars;
                tgt.bars.push_back(t.mono);
                emit(tgt, static_cast<int>(col),
                     Scalar{normMod(sign * t.x.c, cc.ring.l), t.x.a, 0});
            }
        }

        std::vector<MapEntry> entries;
        for (const auto& [key, x] : acc) {
            if (x.c != 0) entries.push_back({key.first, key.second, x});
        }
        cc.differentials.push_back(makeMap(cc.modules[static_cast<size_t>(s)],
                                           cc.modules[static_cast<size_t>(s) + 1], {0, 0},
                                           entries));
    }

    for (int s = 0; s + 1 < sTop; ++s) {
        if (!compose(cc.differentials[static_cast<size_t>(s) + 1],
                     cc.differentials[static_cast<size_t>(s)])
                 .isZero()) {
            throw internalError("cobar differential does not square to zero");
        }
    }
    return cc;
}

namespace {

// Indices of generators at each internal degree t; the differential never
// crosses blocks.
std::map<long long, std::vector<int>> blocksByT(const GradedModule& m) {
    std::map<long long, std::vector<int>> out;
    for (size_t i = 0; i < m.gens.size(); ++i) out[m.gens[i].deg.p].push_back(static_cast<int>(i));
    return out;
}

GradedModule pickGens(const GradedModule& m, const std::vector<int>& idx) {
    GradedModule out = zeroModule(m.ring);
    for (int i : idx) out.gens.push_back(m.gens[static_cast<size_t>(i)]);
    return out;
}

HomogeneousMap restrictBlock(const HomogeneousMap& f, const std::vector<int>& srcIdx,
                             const GradedModule& srcM, const std::vector<int>& tgtIdx,
                             const GradedModule& tgtM) {
    std::map<int, int> srcPos, tgtPos;
    for (size_t i = 0; i < srcIdx.size(); ++i) srcPos[srcIdx[i]] = static_cast<int>(i);
    for (size_t i = 0; i < tgtIdx.size(); ++i) tgtPos[tgtIdx[i]] = static_cast<int>(i);
    std::vector<MapEntry> entries;
    for (const auto& e : f.entries) {
        auto sc = srcPos.find(e.col);
        if (sc == srcPos.end()) continue;
        auto tr = tgtPos.find(e.row);
        if (tr == tgtPos.end()) throw internalError("differential crossed a degree block");
        entries.push_back({tr->second, sc->second, e.x});
    }
    return makeMap(srcM, tgtM, f.deg, entries);
}

}  // namespace

ExtResult cotor(const Comodule& m, const ExtWindow& w) {
    CobarComplex cc = cobarComplex(m, w);

    ExtResult out;
    out.ring = cc.ring;
    out.window = w;
    for (int s = 0; s <= w.sMax; ++s) {
        auto mids = blocksByT(cc.modules[static_cast<size_t>(s)]);
        auto lows = blocksByT(s > 0 ? cc.modules[static_cast<size_t>(s) - 1]
                                    : zeroModule(cc.ring));
        auto highs = blocksByT(cc.modules[static_cast<size_t>(s) + 1]);
        GradedModule total = zeroModule(cc.ring);
        for (const auto& [t, midIdx] : mids) {
            static const std::vector<int> kEmpty;
            const std::vector<int>& lowIdx = lows.count(t) ? lows[t] : kEmpty;
            const std::vector<int>& highIdx = highs.count(t) ? highs[t] : kEmpty;
            GradedModule mid = pickGens(cc.modules[static_cast<size_t>(s)], midIdx);
            GradedModule low = s > 0 ? pickGens(cc.modules[static_cast<size_t>(s) - 1], lowIdx)
                                     : zeroModule(cc.ring);
            GradedModule high = pickGens(cc.modules[static_cast<size_t>(s) + 1], highIdx);
            HomogeneousMap incoming =
                s > 0 ? restrictBlock(cc.differentials[static_cast<size_t>(s) - 1], lowIdx,
                                      low, midIdx, mid)
                      : zeroMap(low, mid, {0, 0});
            HomogeneousMap outgoing = restrictBlock(cc.differentials[static_cast<size_t>(s)],
                                                    midIdx, mid, highIdx, high);
            GradedModule h = homologyAt(incoming, outgoing);
            total = directSum(total, shifted(h, {-s, 0}));
        }
        out.byS.push_back(normalized(std::move(total)));
    }
    return out;
}

VanishingLine approximationWindow(const SteenrodPresentation& pres, Rational slope,
                                  Rational intercept, int N) {
    if (N < 1) throw malformedInput("subalgebra index must be at least 1");
    long long k = connectivityOfQuotient(pres, N);
    Rational b = addRat(addRat(intercept, mulRat(slope, rat(1 - k))), rat(1));
    return {slope, b};
}

}  // namespace motx
