#include "motx/homology.hpp"

#include "motx/errors.hpp"

#include <numeric>
#include <string>
#include <utility>

namespace motx {

namespace {

bool sameGens(const GradedModule& a, const GradedModule& b) {
    return a.ring == b.ring && a.gens == b.gens;
}

long long powll(long long base, long long e, long long satAt) {
    long long r = 1;
    for (long long k = 0; k < e; ++k) {
        if (r > satAt / base) return satAt;
        r *= base;
    }
    return r;
}

FpMat matMul(const FpMat& a, const FpMat& b) {
    FpMat c(a.l, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            int x = a.at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < b.cols; ++j)
                c.at(i, j) = normMod(c.at(i, j) + (long long)x * b.at(k, j), a.l);
        }
    return c;
}

bool matIsZero(const FpMat& m) {
    for (int v : m.a)
        if (v != 0) return false;
    return true;
}

bool matIsIdentity(const FpMat& m) {
    if (m.rows != m.cols) return false;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j)
            if (m.at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

// Coefficients of the mod-tau reduction: entries whose forced tau exponent
// is zero survive with their F_l coefficient, everything else dies.
FpMat modTauMatrix(const HomogeneousMap& f) {
    int r = (int)f.tgt.rank();
    int c = (int)f.src.rank();
    FpMat m(f.ring().l, r, c);
    for (const MapEntry& e : f.entries)
        if (e.x.a == 0) m.at(e.row, e.col) = normMod(e.x.c, f.ring().l);
    return m;
}

std::string stepLabel(size_t k) { return "step " + std::to_string(k + 1) + ": "; }

}  // namespace

ConeResult coneHomology(const HomogeneousMap& f) {
    validateMap(f);
    ConeResult out;
    out.sub = cokernel(f).module;
    out.quot = shifted(kernel(f).module, {1, 0});
    if (out.quot.isZero()) {
        out.module = out.sub;
        out.notes.push_back("injective attaching map; the cone is the cokernel");
        return out;
    }
    GradedModule graded = normalized(directSum(out.sub, out.quot));
    if (f.isZero()) {
        out.module = graded;
        out.notes.push_back("zero attaching map; the cone splits as target plus shifted source");
        return out;
    }
    if (out.quot.isFree()) {
        out.module = graded;
        out.notes.push_back("free quotient layer; the extension splits");
        return out;
    }
    if (out.sub.rank() + out.quot.rank() <= 4) {
        std::vector<GradedModule> classes = enumerateExtensions(out.sub, out.quot);
        if (classes.size() == 1) {
            out.module = classes.front();
            out.notes.push_back("extension resolved: a single normal form fits the sequence");
            return out;
        }
        out.module = graded;
        out.ambiguous = true;
        out.candidates = std::move(classes);
        out.notes.push_back("extension not forced; the module field holds the associated graded and "
                            "every candidate normal form is listed");
        return out;
    }
    out.module = graded;
    out.ambiguous = true;
    out.notes.push_back("extension not enumerated: more than 4 generators between kernel and "
                        "cokernel layers; the module field holds the associated graded");
    return out;
}

KunnethResult kunneth(const GradedModule& x, const GradedModule& y) {
    x.validate();
    y.validate();
    if (!(x.ring == y.ring))
        throw malformedInput("tensor factors live over different coefficient rings");
    if (!x.isFree())
        throw hypothesisViolation("the left tensor factor must be free over the coefficients");
    KunnethResult out;
    out.module = tensor(x, y).module;
    out.notes.push_back("left factor free on " + std::to_string(x.rank()) +
                        " generators; no derived terms");
    return out;
}

RealizationImage realize(const GradedModule& m) {
    m.validate();
    RealizationImage out;
    out.source = m;
    for (const Generator& g : m.gens) {
        if (!g.isFree()) continue;
        out.targetDegrees.push_back(g.deg.p);
        out.collapseExponents.push_back(g.deg.q);
    }
    return out;
}

long long realizedDimension(const RealizationImage& r) {
    return (long long)r.targetDegrees.size();
}

GradedModule fromRealization(const RealizationImage& r) {
    CoefficientRing ring = r.source.ring;
    ring.tauInverted = true;
    std::vector<Bidegree> degs;
    degs.reserve(r.targetDegrees.size());
    for (size_t i = 0; i < r.targetDegrees.size(); ++i)
        degs.push_back({r.targetDegrees[i], r.collapseExponents[i]});
    return freeModule(ring, degs);
}

GradedModule realizationKernel(const GradedModule& m) { return tauTorsionPart(m); }

bool realizedIsIsomorphism(const HomogeneousMap& f) { return isIsomorphism(invertTau(f)); }

namespace {

HeightVerdict rationalVerdict(const HomogeneousMap& f, long long /*cap*/) {
    HeightVerdict v;
    v.m = 0;
    v.note = "approximate: rationalized free-part model";
    std::vector<int> freeIdx(f.src.rank(), -1);
    int d = 0;
    for (size_t k = 0; k < f.src.gens.size(); ++k)
        if (f.src.gens[k].isFree()) freeIdx[k] = d++;
    FpMat r(f.ring().l, d, d);
    for (const MapEntry& e : f.entries) {
        if (freeIdx[e.row] < 0 || freeIdx[e.col] < 0 || e.x.a != 0) continue;
        r.at(freeIdx[e.row], freeIdx[e.col]) = normMod(e.x.c, f.ring().l);
    }
    if (d == 0) {
        v.kind = VerdictKind::Nilpotent;
        v.exponent = 1;
        return v;
    }
    FpMat p = r;
    for (int e = 1; e <= d; ++e) {
        if (matIsZero(p)) {
            v.kind = VerdictKind::Nilpotent;
            v.exponent = e;
            return v;
        }
        p = matMul(p, r);
    }
    if (rankFp(r) == d) {
        v.kind = VerdictKind::Isomorphism;
        return v;
    }
    v.kind = VerdictKind::FailsIsomorphism;
    v.cokernel = zeroModule(f.ring());
    v.note += "; cokernel not modeled in the rational check";
    return v;
}

HeightVerdict heightVerdict(int m, int n, const HomogeneousMap& f, long long cap) {
    HeightVerdict v;
    v.m = m;
    if (f.src.isZero()) {
        if (m == n) {
            v.kind = VerdictKind::Isomorphism;
        } else {
            v.kind = VerdictKind::Nilpotent;
            v.exponent = 1;
        }
        v.note = "zero module";
        return v;
    }
    if (isIsomorphism(f)) {
        if (m == n) {
            PowerRelation pr = powerRelation(f, cap);
            if (pr.found) {
                v.kind = VerdictKind::UnitMultiple;
                v.i = pr.i;
                v.j = pr.j;
                return v;
            }
            v.kind = VerdictKind::Isomorphism;
            v.note = "no power relation below the exponent cap";
            return v;
        }
        v.kind = VerdictKind::Isomorphism;
        v.note = "isomorphism away from the critical height";
        return v;
    }
    HomogeneousMap g = f;
    long long e = 1;
    while (!g.isZero() && e <= cap) {
        g = compose(f, g);
        ++e;
    }
    if (g.isZero()) {
        v.kind = VerdictKind::Nilpotent;
        v.exponent = e;
        return v;
    }
    if (m == n) {
        v.kind = VerdictKind::FailsIsomorphism;
        v.cokernel = cokernel(f).module;
        return v;
    }
    v.kind = VerdictKind::Undetermined;
    v.note = "nilpotency bound exceeded at exponent cap " + std::to_string(cap);
    return v;
}

}  // namespace

SelfMapReport classifySelfMap(const std::map<int, HomogeneousMap>& byHeight, int n,
                              long long cap) {
    if (n < 1) throw malformedInput("the critical height must be positive");
    if (byHeight.empty()) throw malformedInput("no heights supplied");
    SelfMapReport report;
    int l = byHeight.begin()->second.ring().l;
    if (cap <= 0) cap = 2LL * l * l * l;
    bool first = true;
    for (const auto& [m, f] : byHeight) {
        validateMap(f);
        if (m < 0) throw malformedInput("heights are nonnegative");
        if (f.ring().l != l) throw malformedInput("the supplied heights disagree on the prime");
        if (!sameGens(f.src, f.tgt))
            throw malformedInput("height maps must be self maps");
        if (m >= 1) {
            if (f.ring().kind != RingKind::FlTauVn || f.ring().n != m || f.ring().tauInverted)
                throw malformedInput("the map at height " + std::to_string(m) +
                                     " must be over F_l[tau][v_" + std::to_string(m) + "^{+-1}]");
        }
        if (first) {
            report.degree = f.deg;
            first = false;
        } else if (!(f.deg == report.degree)) {
            throw malformedInput("the supplied heights disagree on the map degree");
        }
        report.verdicts.push_back(m == 0 ? rationalVerdict(f, cap)
                                         : heightVerdict(m, n, f, cap));
    }
    // Self-map degrees are j*(2(l^n - 1), l^n - 1) - (0, c) with a
    // nonnegative tau twist c.
    long long vp = 2 * (powll(l, n, 1LL << 60) - 1);
    long long vq = powll(l, n, 1LL << 60) - 1;
    if (vp != 0 && report.degree.p % vp == 0) {
        long long j = report.degree.p / vp;
        long long c = j * vq - report.degree.q;
        report.degreeIsVnMultiple = c >= 0;
        if (report.degreeIsVnMultiple && c > 0)
            report.notes.push_back("degree carries a tau twist of " + std::to_string(c));
    }
    if (!report.degreeIsVnMultiple)
        report.notes.push_back("map degree " + toText(report.degree) +
                               " is not a twisted multiple of the periodicity degree");
    if (!byHeight.count(n))
        report.notes.push_back("no map supplied at the critical height " + std::to_string(n));
    return report;
}

PowerRelation powerRelation(const HomogeneousMap& f, long long cap) {
    validateMap(f);
    const CoefficientRing ring = f.ring();
    if (!ring.hasV() || ring.tauInverted)
        throw malformedInput("power relations live over F_l[tau][v_n^{+-1}]");
    if (!sameGens(f.src, f.tgt)) throw malformedInput("power relation needs a self map");
    PowerRelation out;
    if (f.src.isZero()) {
        out.found = true;
        out.i = 1;
        out.j = 0;
        out.notes.push_back("zero module");
        return out;
    }
    if (!isIsomorphism(f)) throw hypothesisViolation("power relation needs an isomorphism");
    if (cap <= 0) cap = 2LL * ring.l * ring.l * ring.l;
    const long long vp = ring.vp();
    const long long vq = ring.vq();
    if (f.deg.p * vq != f.deg.q * vp) {
        out.notes.push_back("the degree of the map is not parallel to the periodicity degree; "
                            "no power of it can equal a v power");
        return out;
    }
    long long i0 = 1;
    while ((i0 * f.deg.p) % vp != 0) ++i0;

    // Order of the reduced matrix in the finite unit group. An element order
    // in GL_r(F_l) divides l^s * lcm(l^k - 1, k <= r) with l^s >= r.
    FpMat c = modTauMatrix(f);
    FpMat base = c;
    for (long long k = 1; k < i0; ++k) base = matMul(base, c);
    long long orderBound = 1;
    for (int k = 1; k <= (int)f.src.rank() && orderBound < 2000000; ++k)
        orderBound = std::lcm(orderBound, powll(ring.l, k, 1LL << 40) - 1);
    long long ls = 1;
    while (ls < (long long)f.src.rank()) ls *= ring.l;
    orderBound = std::min(orderBound * ls, (long long)2000000);
    FpMat d = base;
    long long mult = 1;
    while (!matIsIdentity(d)) {
        d = matMul(d, base);
        ++mult;
        if (mult > orderBound)
            throw internalError("unit order search exceeded the group exponent bound");
    }
    long long i = i0 * mult;
    long long j = i * f.deg.p / vp;
    out.notes.push_back("reduced mod tau: matrix order " + std::to_string(mult) +
                        " at step " + std::to_string(i0));

    HomogeneousMap x = powerMap(f, i);
    long long curI = i;
    long long curJ = j;
    for (int k = 0;; ++k) {
        HomogeneousMap target = scalarMultiple(f.src, makeScalar(ring, 1, 0, curJ));
        if (mapsEqual(x, target)) {
            out.found = true;
            out.i = curI;
            out.j = curJ;
            out.notes.push_back(k == 0 ? "residual zero at the base exponent"
                                       : "residual vanished after raising to the l^" +
                                             std::to_string(k) + " power");
            return out;
        }
        if (k == 0) out.residual = addMaps(x, negate(target));
        if (curI * ring.l > cap) break;
        x = powerMap(x, ring.l);
        curI *= ring.l;
        curJ *= ring.l;
    }
    out.notes.push_back("no power relation below exponent cap " + std::to_string(cap) +
                        "; the residual shown is f^" + std::to_string(i) + " - v^" +
                        std::to_string(j));
    return out;
}

bool intertwinesAfterPowers(const HomogeneousMap& h, const HomogeneousMap& f,
                            const HomogeneousMap& g, long long i, int m) {
    if (i < 1 || m < 0) throw malformedInput("exponents must satisfy i >= 1, m >= 0");
    long long lm = powll(h.ring().l, m, 1LL << 40);
    if (lm >= (1LL << 40)) throw malformedInput("power tower too large");
    return mapsEqual(compose(h, powerMap(f, i)), compose(powerMap(g, lm), h));
}

void FiniteAlgebra::validate() const {
    if (!isOddPrime(l)) throw malformedInput("the coefficient prime must be an odd prime");
    if (dim < 0) throw malformedInput("algebra dimension must be nonnegative");
    if ((int)table.size() != dim)
        throw malformedInput("the multiplication table must be dim x dim");
    for (const auto& row : table) {
        if ((int)row.size() != dim)
            throw malformedInput("the multiplication table must be dim x dim");
        for (const auto& cell : row)
            if ((int)cell.size() != dim)
                throw malformedInput("table products must have dim coordinates");
    }
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                std::vector<int> left(dim, 0), right(dim, 0);
                for (int t = 0; t < dim; ++t) {
                    int xl = table[i][j][t];
                    int xr = table[j][k][t];
                    for (int s = 0; s < dim; ++s) {
                        left[s] = normMod(left[s] + (long long)xl * table[t][k][s], l);
                        right[s] = normMod(right[s] + (long long)xr * table[i][t][s], l);
                    }
                }
                if (left != right)
                    throw hypothesisViolation("the multiplication table is not associative");
            }
}

std::vector<int> algebraMul(const FiniteAlgebra& a, const std::vector<int>& x,
                            const std::vector<int>& y) {
    if ((int)x.size() != a.dim || (int)y.size() != a.dim)
        throw malformedInput("algebra elements must have dim coordinates");
    std::vector<int> z(a.dim, 0);
    for (int i = 0; i < a.dim; ++i) {
        if (x[i] % a.l == 0) continue;
        for (int j = 0; j < a.dim; ++j) {
            long long xy = (long long)normMod(x[i], a.l) * normMod(y[j], a.l);
            if (xy % a.l == 0) continue;
            for (int t = 0; t < a.dim; ++t)
                z[t] = normMod(z[t] + xy * a.table[i][j][t], a.l);
        }
    }
    return z;
}

std::vector<int> algebraPower(const FiniteAlgebra& a, const std::vector<int>& x, long long k) {
    if (k < 1) throw malformedInput("algebra powers start at exponent 1");
    std::vector<int> p = x;
    for (int& v : p) v = normMod(v, a.l);
    for (long long e = 1; e < k; ++e) p = algebraMul(a, p, x);
    return p;
}

FpMat adOperator(const FiniteAlgebra& a, const std::vector<int>& x) {
    a.validate();
    FpMat m(a.l, a.dim, a.dim);
    for (int j = 0; j < a.dim; ++j) {
        std::vector<int> ej(a.dim, 0);
        ej[j] = 1;
        std::vector<int> xe = algebraMul(a, x, ej);
        std::vector<int> ex = algebraMul(a, ej, x);
        for (int t = 0; t < a.dim; ++t) m.at(t, j) = normMod(xe[t] - ex[t], a.l);
    }
    return m;
}

bool adPowerCheck(const FiniteAlgebra& a, const std::vector<int>& x, long long i) {
    if (i < 1) throw malformedInput("the power check needs i >= 1");
    a.validate();
    std::vector<std::vector<int>> xp(i + 1);
    xp[1] = algebraPower(a, x, 1);
    for (long long e = 2; e <= i; ++e) xp[e] = algebraMul(a, xp[e - 1], x);
    for (int t = 0; t < a.dim; ++t) {
        std::vector<int> b(a.dim, 0);
        b[t] = 1;
        std::vector<int> lhs(a.dim, 0);
        {
            std::vector<int> xb = algebraMul(a, xp[i], b);
            std::vector<int> bx = algebraMul(a, b, xp[i]);
            for (int s = 0; s < a.dim; ++s) lhs[s] = normMod(xb[s] - bx[s], a.l);
        }
        std::vector<int> rhs(a.dim, 0);
        std::vector<int> adj = b;
        for (long long j = 1; j <= i; ++j) {
            std::vector<int> xa = algebraMul(a, x, adj);
            std::vector<int> ax = algebraMul(a, adj, x);
            for (int s = 0; s < a.dim; ++s) adj[s] = normMod(xa[s] - ax[s], a.l);
            std::vector<int> term = (j == i) ? adj : algebraMul(a, adj, xp[i - j]);
            int coeff = binomMod(i, j, a.l);
            for (int s = 0; s < a.dim; ++s)
                rhs[s] = normMod(rhs[s] + (long long)coeff * term[s], a.l);
        }
        if (lhs != rhs) return false;
    }
    return true;
}

int adNilpotencyIndex(const FiniteAlgebra& a, const std::vector<int>& x) {
    FpMat m = adOperator(a, x);
    FpMat p = m;
    for (int e = 1; e <= std::max(a.dim, 1); ++e) {
        if (matIsZero(p)) return e;
        p = matMul(p, m);
    }
    return -1;
}

std::vector<bool> vanishesAt(const GradedModule& m, const std::vector<Bidegree>& ds) {
    std::vector<bool> out;
    out.reserve(ds.size());
    for (Bidegree d : ds) out.push_back(sliceDimension(m, d) == 0);
    return out;
}

std::vector<Bidegree> builtinCellDegrees(const std::string& name, int l, int n) {
    if (name == "sphere") return {{0, 0}};
    if (name == "moore") return {{0, 0}, {1, 0}};
    if (name == "cone-eta") return {{0, 0}, {2, 1}};
    if (name == "cone-cv")
        throw malformedInput("builtin cone-cv is not free; build it as the cone of the cv map");
    if (name == "B") {
        if (l != 3 || n != 1) throw malformedInput("builtin B is provided at l=3, height 1");
        return {{0, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3}};
    }
    throw malformedInput("unknown builtin cell: " + name);
}

GradedModule builtinCell(const std::string& name, int l, int n) {
    CoefficientRing ring = ringFlTauVn(l, n);
    if (name == "cone-cv") {
        if (n != 1) throw malformedInput("builtin cone-cv is a height 1 example");
        GradedModule m{ring, {{{0, 0}, l - 1}, {{1, 0}, l - 1}}};
        m.validate();
        return m;
    }
    return freeModule(ring, builtinCellDegrees(name, l, n));
}

HomogeneousMap builtinMap(const std::string& name, int l, int n) {
    CoefficientRing ring = ringFlTauVn(l, n);
    if (name == "l") {
        GradedModule s = builtinCell("sphere", l, n);
        return zeroMap(s, s, {0, 0});
    }
    if (name == "eta")
        return zeroMap(freeModule(ring, {{1, 1}}), builtinCell("sphere", l, n), {0, 0});
    if (name == "cv") {
        if (n != 1) throw malformedInput("builtin cv is a height 1 self map");
        return scalarMultiple(builtinCell("moore", l, 1), makeScalar(ring, 1, l - 1, 1));
    }
    throw malformedInput("unknown builtin map: " + name);
}

CellEvalResult evalCellDescription(const json& program) {
    if (!program.is_object()) throw malformedInput("a cell description must be a JSON object");
    if (!program.contains("ring")) throw malformedInput("a cell description needs a ring");
    CoefficientRing ring = ringFromJson(program.at("ring"));
    std::vector<Bidegree> start{{0, 0}};
    if (program.contains("start")) {
        const json& s = program.at("start");
        if (!s.is_array()) throw malformedInput("start must be a list of [p, q] pairs");
        start.clear();
        for (const json& d : s) {
            if (!d.is_array() || d.size() != 2)
                throw malformedInput("start must be a list of [p, q] pairs");
            start.push_back({d.at(0).get<long long>(), d.at(1).get<long long>()});
        }
    }
    CellEvalResult out;
    out.module = freeModule(ring, start);
    if (!program.contains("steps")) return out;
    const json& steps = program.at("steps");
    if (!steps.is_array()) throw malformedInput("steps must be a list");
    for (size_t k = 0; k < steps.size(); ++k) {
        const json& step = steps.at(k);
        if (!step.is_object() || !step.contains("op"))
            throw malformedInput(stepLabel(k) + "missing op");
        std::string op = step.at("op").get<std::string>();
        bool wasAmbiguous = out.ambiguous;
        if (op == "cone") {
            if (!step.contains("src") || !step.contains("map"))
                throw malformedInput(stepLabel(k) + "cone needs src and map");
            GradedModule src = moduleFromJson(step.at("src"));
            HomogeneousMap f = mapFromJson(step.at("map"), src, out.module);
            ConeResult c = coneHomology(f);
            out.module = c.module;
            if (c.ambiguous) {
                out.ambiguous = true;
                out.candidates = c.candidates;
            }
            for (const std::string& note : c.notes) out.notes.push_back(stepLabel(k) + note);
        } else if (op == "smash") {
            if (!step.contains("module"))
                throw malformedInput(stepLabel(k) + "smash needs a module");
            KunnethResult kr = kunneth(moduleFromJson(step.at("module")), out.module);
            out.module = kr.module;
        } else if (op == "split") {
            if (!step.contains("idempotent"))
                throw malformedInput(stepLabel(k) + "split needs an idempotent");
            HomogeneousMap e = mapFromJson(step.at("idempotent"), out.module, out.module);
            out.module = imageOfIdempotent(e).module;
        } else if (op == "localize") {
            out.notes.push_back(stepLabel(k) + "localization: no change at the module level");
        } else {
            throw malformedInput(stepLabel(k) + "unknown op: " + op);
        }
        if (wasAmbiguous && op != "localize") {
            out.candidates.clear();
            out.notes.push_back(stepLabel(k) +
                                "applied to the associated graded of an unresolved extension; "
                                "candidate list dropped");
        }
    }
    return out;
}

std::string toText(const SelfMapReport& r) {
    std::string out = "self map of degree " + toText(r.degree);
    if (!r.degreeIsVnMultiple) out += " (not a v multiple)";
    out += "\n";
    for (const HeightVerdict& v : r.verdicts) {
        out += "height " + std::to_string(v.m) + ": ";
        switch (v.kind) {
            case VerdictKind::Nilpotent:
                out += "nilpotent, exponent " + std::to_string(v.exponent);
                break;
            case VerdictKind::Isomorphism:
                out += "isomorphism";
                break;
            case VerdictKind::UnitMultiple:
                out += "unit multiple, f^" + std::to_string(v.i) + " = v^" + std::to_string(v.j);
                break;
            case VerdictKind::FailsIsomorphism:
                out += "fails isomorphism, cokernel " + toText(v.cokernel);
                break;
            case VerdictKind::Undetermined:
                out += "undetermined";
                break;
        }
        if (!v.note.empty()) out += "; " + v.note;
        out += "\n";
    }
    for (const std::string& n : r.notes) out += n + "\n";
    return out;
}

std::string toText(const PowerRelation& r) {
    std::string out;
    if (r.found) {
        out = "f^" + std::to_string(r.i) + " = v^" + std::to_string(r.j);
    } else {
        out = "no power relation found";
        if (r.residual) out += "; residual " + toText(*r.residual);
    }
    for (const std::string& n : r.notes) out += "\n" + n;
    return out;
}

}  // namespace motx
