#include "motx/module.hpp"

#include "motx/errors.hpp"

#include <algorithm>
#include <tuple>

namespace motx {

namespace {

long long torsionSortKey(long long torsion) {
    // Free summands sort after all torsion summands.
    return torsion == 0 ? (long long)1 << 62 : torsion;
}

}  // namespace

bool GradedModule::isFree() const {
    for (const auto& g : gens)
        if (!g.isFree())
            return false;
    return true;
}

void GradedModule::validate() const {
    ring.validate();
    for (const auto& g : gens) {
        if (g.torsion < 0)
            throw malformedInput("negative torsion order");
        if (g.torsion > 0 && (!ring.hasTau() || ring.tauInverted))
            throw malformedInput("tau-torsion summand over a ring where tau is absent or invertible");
    }
}

GradedModule freeModule(const CoefficientRing& r, const std::vector<Bidegree>& degrees) {
    GradedModule m{r, {}};
    m.gens.reserve(degrees.size());
    for (auto d : degrees)
        m.gens.push_back({d, 0});
    return m;
}

GradedModule zeroModule(const CoefficientRing& r) {
    return GradedModule{r, {}};
}

GradedModule normalized(GradedModule m) {
    std::sort(m.gens.begin(), m.gens.end(), [](const Generator& x, const Generator& y) {
        return std::tuple(x.deg.p, x.deg.q, torsionSortKey(x.torsion)) <
               std::tuple(y.deg.p, y.deg.q, torsionSortKey(y.torsion));
    });
    return m;
}

GradedModule shifted(const GradedModule& m, Bidegree d) {
    GradedModule r = m;
    for (auto& g : r.gens)
        g.deg = g.deg + d;
    return r;
}

GradedModule directSum(const GradedModule& a, const GradedModule& b) {
    if (!(a.ring == b.ring))
        throw malformedInput("direct sum over mismatched rings");
    GradedModule r = a;
    r.gens.insert(r.gens.end(), b.gens.begin(), b.gens.end());
    return r;
}

std::vector<SliceMonomial> sliceBasis(const GradedModule& m, Bidegree d) {
    std::vector<SliceMonomial> out;
    const auto& ring = m.ring;
    for (int i = 0; i < (int)m.gens.size(); ++i) {
        const auto& g = m.gens[i];
        long long b = 0;
        if (ring.hasV()) {
            long long dp = d.p - g.deg.p;
            if (dp % ring.vp() != 0)
                continue;
            b = dp / ring.vp();
        } else if (d.p != g.deg.p) {
            continue;
        }
        // tau^a v^b g sits at deg(g) + b*vDeg - (0, a)
        long long a = g.deg.q + b * (ring.hasV() ? ring.vq() : 0) - d.q;
        if (!ring.hasTau()) {
            if (a != 0)
                continue;
        } else if (!ring.tauInverted) {
            if (a < 0)
                continue;
            if (g.torsion > 0 && a >= g.torsion)
                continue;
        } else {
            // torsion gens were dropped at localization time; any a works
        }
        out.push_back({i, ring.hasTau() ? a : 0, b});
    }
    return out;
}

long long sliceDimension(const GradedModule& m, Bidegree d) {
    return (long long)sliceBasis(m, d).size();
}

TensorResult tensor(const GradedModule& a, const GradedModule& b) {
    if (!(a.ring == b.ring))
        throw malformedInput("tensor over mismatched rings");
    TensorResult res{zeroModule(a.ring), true};
    for (const auto& x : a.gens) {
        for (const auto& y : b.gens) {
            Generator g;
            g.deg = x.deg + y.deg;
            if (x.isFree())
                g.torsion = y.torsion;
            else if (y.isFree())
                g.torsion = x.torsion;
            else {
                g.torsion = std::min(x.torsion, y.torsion);
                res.torFree = false;
            }
            res.module.gens.push_back(g);
        }
    }
    return res;
}

GradedModule dualizeFree(const GradedModule& m) {
    GradedModule r = m;
    for (auto& g : r.gens) {
        if (!g.isFree())
            throw hypothesisViolation("dualizeFree requires a free module");
        g.deg = -g.deg;
    }
    return r;
}

GradedModule invertTau(const GradedModule& m) {
    if (!m.ring.hasTau())
        throw hypothesisViolation("invertTau needs a ring containing tau");
    GradedModule r{m.ring, {}};
    r.ring.tauInverted = true;
    for (const auto& g : m.gens)
        if (g.isFree())
            r.gens.push_back(g);
    return r;
}

GradedModule tauTorsionPart(const GradedModule& m) {
    GradedModule r{m.ring, {}};
    for (const auto& g : m.gens)
        if (!g.isFree())
            r.gens.push_back(g);
    return r;
}

GradedModule orbitNormalized(const GradedModule& m) {
    GradedModule r = m;
    if (r.ring.hasV()) {
        long long vp = r.ring.vp(), vq = r.ring.vq();
        for (auto& g : r.gens) {
            long long k = g.deg.p >= 0 ? g.deg.p / vp : -((-g.deg.p + vp - 1) / vp);
            g.deg.p -= k * vp;
            g.deg.q -= k * vq;
        }
    }
    // Inverting tau makes every tau power a unit, so generator weights are
    // only defined up to shifts along (0, -1).
    if (r.ring.tauInverted) {
        for (auto& g : r.gens)
            g.deg.q = 0;
    }
    return normalized(std::move(r));
}

bool isoEqual(const GradedModule& a, const GradedModule& b) {
    if (!(a.ring == b.ring))
        return false;
    GradedModule x = orbitNormalized(a), y = orbitNormalized(b);
    return x.gens == y.gens;
}

std::string toText(const GradedModule& m) {
    if (m.isZero())
        return "0";
    std::string s;
    for (size_t i = 0; i < m.gens.size(); ++i) {
        if (i)
            s += " + ";
        const auto& g = m.gens[i];
        s += toText(g.deg);
        if (!g.isFree())
            s += "/t^" + std::to_string(g.torsion);
    }
    return s;
}

}  // namespace motx
