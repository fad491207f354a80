#include "motx/map.hpp"

#include "motx/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace motx {

namespace {

bool sameRing(const CoefficientRing& a, const CoefficientRing& b) {
    if (a.l != b.l || a.kind != b.kind || a.tauInverted != b.tauInverted) return false;
    if (a.kind == RingKind::FlTauVn && a.n != b.n) return false;
    return true;
}

bool entryLess(const MapEntry& a, const MapEntry& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
}

// Drops an entry when the target generator's torsion annihilates it.
bool killedByTorsion(const Generator& tgtGen, const Scalar& x) {
    return tgtGen.torsion > 0 && x.a >= tgtGen.torsion;
}

void checkTorsionRespected(const Generator& srcGen, const Generator& tgtGen, const Scalar& x,
                           int row, int col) {
    if (srcGen.torsion == 0) return;
    if (tgtGen.torsion == 0) {
        throw hypothesisViolation("entry (" + std::to_string(row) + "," + std::to_string(col) +
                                  ") sends a torsion generator to a torsion-free target");
    }
    if (x.a + srcGen.torsion < tgtGen.torsion) {
        throw hypothesisViolation("entry (" + std::to_string(row) + "," + std::to_string(col) +
                                  ") does not kill the source torsion relation");
    }
}

}  // namespace

std::optional<std::pair<long long, long long>> forcedExponents(const CoefficientRing& r,
                                                               Bidegree srcDeg, Bidegree tgtDeg,
                                                               Bidegree mapDeg) {
    const long long dp = srcDeg.p + mapDeg.p - tgtDeg.p;
    const long long dq = srcDeg.q + mapDeg.q - tgtDeg.q;
    long long b = 0;
    if (r.hasV()) {
        const long long vp = r.vp();
        if (dp % vp != 0) return std::nullopt;
        b = dp / vp;
    } else if (dp != 0) {
        return std::nullopt;
    }
    // deg(t^a v^b) = (b*vp, b*vq - a)
    const long long a = (r.hasV() ? b * r.vq() : 0) - dq;
    if (!r.hasTau() && a != 0) return std::nullopt;
    if (r.hasTau() && !r.tauInverted && a < 0) return std::nullopt;
    return std::make_pair(a, b);
}

Scalar HomogeneousMap::at(int row, int col) const {
    for (const auto& e : entries) {
        if (e.row == row && e.col == col) return e.x;
        if (e.row > row || (e.row == row && e.col > col)) break;
    }
    return Scalar{};
}

HomogeneousMap makeMap(GradedModule src, GradedModule tgt, Bidegree deg,
                       std::vector<MapEntry> entries) {
    if (!sameRing(src.ring, tgt.ring)) {
        throw malformedInput("map endpoints live over different coefficient rings");
    }
    const CoefficientRing& r = src.ring;
    // Merge duplicate slots first, then normalize and validate.
    std::map<std::pair<int, int>, Scalar> slots;
    for (const auto& e : entries) {
        if (e.row < 0 || e.row >= static_cast<int>(tgt.gens.size()) || e.col < 0 ||
            e.col >= static_cast<int>(src.gens.size())) {
            throw malformedInput("map entry index out of range");
        }
        Scalar x = makeScalar(r, e.x.c, e.x.a, e.x.b);
        if (x.c == 0) continue;
        auto key = std::make_pair(e.row, e.col);
        auto it = slots.find(key);
        if (it == slots.end()) {
            slots.emplace(key, x);
        } else {
            it->second = addScalar(r, it->second, x);
        }
    }
    std::vector<MapEntry> out;
    out.reserve(slots.size());
    for (const auto& [key, x] : slots) {
        if (x.c == 0) continue;
        const Generator& sg = src.gens[static_cast<size_t>(key.second)];
        const Generator& tg = tgt.gens[static_cast<size_t>(key.first)];
        auto forced = forcedExponents(r, sg.deg, tg.deg, deg);
        if (!forced || forced->first != x.a || forced->second != x.b) {
            throw malformedInput("map entry (" + std::to_string(key.first) + "," +
                                 std::to_string(key.second) + ") is not homogeneous of degree (" +
                                 std::to_string(deg.p) + "," + std::to_string(deg.q) + ")");
        }
        if (killedByTorsion(tg, x)) continue;
        checkTorsionRespected(sg, tg, x, key.first, key.second);
        out.push_back(MapEntry{key.first, key.second, x});
    }
    HomogeneousMap f;
    f.src = std::move(src);
    f.tgt = std::move(tgt);
    f.deg = deg;
    f.entries = std::move(out);
    return f;
}

HomogeneousMap makeMapFromCoefs(GradedModule src, GradedModule tgt, Bidegree deg,
                                const std::vector<CoefEntry>& coefs) {
    const CoefficientRing& r = src.ring;
    std::vector<MapEntry> entries;
    entries.reserve(coefs.size());
    for (const auto& e : coefs) {
        if (e.row < 0 || e.row >= static_cast<int>(tgt.gens.size()) || e.col < 0 ||
            e.col >= static_cast<int>(src.gens.size())) {
            throw malformedInput("map entry index out of range");
        }
        if (normMod(e.c, r.l) == 0) continue;
        auto forced = forcedExponents(r, src.gens[static_cast<size_t>(e.col)].deg,
                                      tgt.gens[static_cast<size_t>(e.row)].deg, deg);
        if (!forced) {
            throw malformedInput("no homogeneous element fits map entry (" +
                                 std::to_string(e.row) + "," + std::to_string(e.col) + ")");
        }
        entries.push_back(MapEntry{e.row, e.col, Scalar{normMod(e.c, r.l), forced->first, forced->second}});
    }
    return makeMap(std::move(src), std::move(tgt), deg, std::move(entries));
}

HomogeneousMap zeroMap(GradedModule src, GradedModule tgt, Bidegree deg) {
    HomogeneousMap f;
    f.src = std::move(src);
    f.tgt = std::move(tgt);
    f.deg = deg;
    return f;
}

HomogeneousMap identityMap(const GradedModule& m) {
    std::vector<MapEntry> entries;
    entries.reserve(m.gens.size());
    for (int i = 0; i < static_cast<int>(m.gens.size()); ++i) {
        entries.push_back(MapEntry{i, i, Scalar{1, 0, 0}});
    }
    return makeMap(m, m, Bidegree{0, 0}, std::move(entries));
}

HomogeneousMap scalarMultiple(const GradedModule& m, const Scalar& x) {
    std::vector<MapEntry> entries;
    entries.reserve(m.gens.size());
    for (int i = 0; i < static_cast<int>(m.gens.size()); ++i) {
        entries.push_back(MapEntry{i, i, x});
    }
    return makeMap(m, m, degreeOf(m.ring, x), std::move(entries));
}

HomogeneousMap compose(const HomogeneousMap& g, const HomogeneousMap& f) {
    if (f.tgt.gens != g.src.gens || !sameRing(f.tgt.ring, g.src.ring)) {
        throw internalError("composition endpoints do not match");
    }
    const CoefficientRing& r = f.ring();
    std::map<std::pair<int, int>, Scalar> slots;
    for (const auto& ge : g.entries) {
        for (const auto& fe : f.entries) {
            if (fe.row != ge.col) continue;
            Scalar x = mulScalar(r, ge.x, fe.x);
            if (x.c == 0) continue;
            auto key = std::make_pair(ge.row, fe.col);
            auto it = slots.find(key);
            if (it == slots.end()) {
                slots.emplace(key, x);
            } else {
                it->second = addScalar(r, it->second, x);
            }
        }
    }
    std::vector<MapEntry> entries;
    entries.reserve(slots.size());
    for (const auto& [key, x] : slots) {
        if (x.c != 0) entries.push_back(MapEntry{key.first, key.second, x});
    }
    return makeMap(f.src, g.tgt, f.deg + g.deg, std::move(entries));
}

HomogeneousMap addMaps(const HomogeneousMap& f, const HomogeneousMap& g) {
    if (f.src.gens != g.src.gens || f.tgt.gens != g.tgt.gens || f.deg != g.deg) {
        throw internalError("sum of maps with different endpoints or degrees");
    }
    std::vector<MapEntry> entries = f.entries;
    entries.insert(entries.end(), g.entries.begin(), g.entries.end());
    return makeMap(f.src, f.tgt, f.deg, std::move(entries));
}

HomogeneousMap negate(const HomogeneousMap& f) {
    std::vector<MapEntry> entries = f.entries;
    for (auto& e : entries) e.x = negScalar(f.ring(), e.x);
    return makeMap(f.src, f.tgt, f.deg, std::move(entries));
}

HomogeneousMap powerMap(const HomogeneousMap& f, long long k) {
    if (f.src.gens != f.tgt.gens) throw internalError("power of a non-self map");
    if (k < 1) throw internalError("power exponent must be positive");
    // Square-and-multiply keeps the composition count logarithmic.
    HomogeneousMap acc = f;
    long long done = 1;
    std::vector<std::pair<long long, HomogeneousMap>> squares{{1, f}};
    while (squares.back().first * 2 <= k) {
        squares.emplace_back(squares.back().first * 2,
                             compose(squares.back().second, squares.back().second));
    }
    acc = squares.back().second;
    done = squares.back().first;
    while (done < k) {
        for (auto it = squares.rbegin(); it != squares.rend(); ++it) {
            if (done + it->first <= k) {
                acc = compose(acc, it->second);
                done += it->first;
                break;
            }
        }
    }
    return acc;
}

bool mapsEqual(const HomogeneousMap& f, const HomogeneousMap& g) {
    return f.src.gens == g.src.gens && f.tgt.gens == g.tgt.gens && f.deg == g.deg &&
           f.entries == g.entries;
}

void validateMap(const HomogeneousMap& f) {
    f.src.validate();
    f.tgt.validate();
    if (!sameRing(f.src.ring, f.tgt.ring)) {
        throw malformedInput("map endpoints live over different coefficient rings");
    }
    if (!std::is_sorted(f.entries.begin(), f.entries.end(), entryLess)) {
        throw internalError("map entries are not sorted");
    }
    makeMap(f.src, f.tgt, f.deg, f.entries);
}

HomogeneousMap invertTau(const HomogeneousMap& f) {
    GradedModule src = invertTau(f.src);
    GradedModule tgt = invertTau(f.tgt);
    std::vector<int> srcIdx(f.src.gens.size(), -1);
    std::vector<int> tgtIdx(f.tgt.gens.size(), -1);
    int k = 0;
    for (size_t i = 0; i < f.src.gens.size(); ++i) {
        if (f.src.gens[i].torsion == 0) srcIdx[i] = k++;
    }
    k = 0;
    for (size_t i = 0; i < f.tgt.gens.size(); ++i) {
        if (f.tgt.gens[i].torsion == 0) tgtIdx[i] = k++;
    }
    std::vector<MapEntry> entries;
    for (const auto& e : f.entries) {
        const int row = tgtIdx[static_cast<size_t>(e.row)];
        const int col = srcIdx[static_cast<size_t>(e.col)];
        if (row >= 0 && col >= 0) entries.push_back(MapEntry{row, col, e.x});
    }
    return makeMap(std::move(src), std::move(tgt), f.deg, std::move(entries));
}

FpMat sliceMatrix(const HomogeneousMap& f, Bidegree d) {
    const CoefficientRing& r = f.ring();
    std::vector<SliceMonomial> cols = sliceBasis(f.src, d);
    std::vector<SliceMonomial> rows = sliceBasis(f.tgt, d + f.deg);
    std::map<std::tuple<int, long long, long long>, int> rowIndex;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        rowIndex.emplace(std::make_tuple(rows[static_cast<size_t>(i)].gen,
                                         rows[static_cast<size_t>(i)].a,
                                         rows[static_cast<size_t>(i)].b),
                         i);
    }
    FpMat m(r.l, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (const auto& e : f.entries) {
        for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
            const SliceMonomial& sm = cols[static_cast<size_t>(j)];
            if (sm.gen != e.col) continue;
            const long long a = sm.a + e.x.a;
            const long long b = sm.b + e.x.b;
            const Generator& tg = f.tgt.gens[static_cast<size_t>(e.row)];
            if (tg.torsion > 0 && a >= tg.torsion) continue;
            auto it = rowIndex.find(std::make_tuple(e.row, a, b));
            if (it == rowIndex.end()) {
                throw internalError("slice image monomial missing from target slice basis");
            }
            m.at(it->second, j) = normMod(m.at(it->second, j) + e.x.c, r.l);
        }
    }
    return m;
}

std::string toText(const HomogeneousMap& f) {
    std::ostringstream os;
    os << "map deg (" << f.deg.p << "," << f.deg.q << ") [" << f.src.gens.size() << " -> "
       << f.tgt.gens.size() << "]:";
    for (const auto& e : f.entries) {
        os << " (" << e.row << "," << e.col << ")=" << toText(f.ring(), e.x);
    }
    return os.str();
}

}  // namespace motx
