#pragma once

#include "motx/homalg.hpp"

#include <random>

// Shared random instance builders for the property tests. Seeds are fixed
// per test case so failures reproduce.
namespace motx::testsupport {

inline long long randIn(std::mt19937_64& rng, long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

inline CoefficientRing randomRing(std::mt19937_64& rng) {
    const int l = (randIn(rng, 0, 1) == 0) ? 3 : 5;
    switch (randIn(rng, 0, 2)) {
        case 0: return ringFl(l);
        case 1: return ringFlTau(l);
        default: return ringFlTauVn(l, static_cast<int>(randIn(rng, 1, 2)));
    }
}

inline GradedModule randomModule(std::mt19937_64& rng, const CoefficientRing& r, int maxGens,
                                 long long degSpan, long long maxTorsion) {
    GradedModule m{r, {}};
    const long long count = randIn(rng, 0, maxGens);
    for (long long i = 0; i < count; ++i) {
        Generator g;
        g.deg = Bidegree{randIn(rng, -degSpan, degSpan), randIn(rng, -degSpan, degSpan)};
        if (maxTorsion >= 1 && r.hasTau() && !r.tauInverted && randIn(rng, 0, 2) == 0) {
            g.torsion = randIn(rng, 1, maxTorsion);
        }
        m.gens.push_back(g);
    }
    return m;
}

// A target whose generator degrees are reachable from the source degrees, so
// random maps are usually nonzero.
inline GradedModule reachableTarget(std::mt19937_64& rng, const GradedModule& src, int maxGens,
                                    long long maxTorsion) {
    GradedModule m{src.ring, {}};
    if (src.gens.empty()) return m;
    const long long count = randIn(rng, 1, maxGens);
    for (long long i = 0; i < count; ++i) {
        const Generator& base = src.gens[static_cast<size_t>(
            randIn(rng, 0, static_cast<long long>(src.gens.size()) - 1))];
        Generator g;
        g.deg = base.deg;
        if (src.ring.hasTau()) g.deg = g.deg + randIn(rng, -3, 3) * src.ring.tauDegree();
        if (src.ring.hasV()) g.deg = g.deg + randIn(rng, -1, 1) * src.ring.vDegree();
        if (src.ring.hasTau() && !src.ring.tauInverted && randIn(rng, 0, 2) == 0) {
            g.torsion = randIn(rng, 1, maxTorsion);
        }
        m.gens.push_back(g);
    }
    return m;
}

inline HomogeneousMap randomMap(std::mt19937_64& rng, const GradedModule& src,
                                const GradedModule& tgt, Bidegree deg, int density = 2) {
    const CoefficientRing& r = src.ring;
    std::vector<MapEntry> entries;
    for (int i = 0; i < static_cast<int>(tgt.gens.size()); ++i) {
        for (int j = 0; j < static_cast<int>(src.gens.size()); ++j) {
            auto forced = forcedExponents(r, src.gens[static_cast<size_t>(j)].deg,
                                          tgt.gens[static_cast<size_t>(i)].deg, deg);
            if (!forced) continue;
            const auto [a, b] = *forced;
            const Generator& sg = src.gens[static_cast<size_t>(j)];
            const Generator& tg = tgt.gens[static_cast<size_t>(i)];
            if (tg.torsion > 0 && a >= tg.torsion) continue;
            if (sg.torsion > 0 && (tg.torsion == 0 || a + sg.torsion < tg.torsion)) continue;
            if (randIn(rng, 0, density) != 0) continue;
            const int c = static_cast<int>(randIn(rng, 1, r.l - 1));
            entries.push_back(MapEntry{i, j, Scalar{c, a, b}});
        }
    }
    return makeMap(src, tgt, deg, std::move(entries));
}

inline Bidegree randomMapDegree(std::mt19937_64& rng, const CoefficientRing& r) {
    Bidegree d{0, 0};
    if (r.hasTau()) d = d + randIn(rng, -2, 2) * r.tauDegree();
    if (r.hasV()) d = d + randIn(rng, -1, 1) * r.vDegree();
    if (randIn(rng, 0, 1) == 0) d = d + Bidegree{randIn(rng, -2, 2), randIn(rng, -2, 2)};
    return d;
}

}  // namespace motx::testsupport
