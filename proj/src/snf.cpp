#include "motx/snf.hpp"

#include "motx/errors.hpp"

#include <utility>

namespace motx {

namespace {

using Dense = std::vector<std::vector<Scalar>>;

Dense denseIdentity(int n) {
    Dense m(static_cast<size_t>(n), std::vector<Scalar>(static_cast<size_t>(n)));
    for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)][static_cast<size_t>(i)] = Scalar{1, 0, 0};
    return m;
}

Dense denseOf(const HomogeneousMap& f) {
    Dense m(f.tgt.gens.size(), std::vector<Scalar>(f.src.gens.size()));
    for (const auto& e : f.entries) {
        m[static_cast<size_t>(e.row)][static_cast<size_t>(e.col)] = e.x;
    }
    return m;
}

HomogeneousMap mapOf(const CoefficientRing& r, const Dense& m, GradedModule src, GradedModule tgt,
                     Bidegree deg) {
    std::vector<MapEntry> entries;
    for (int i = 0; i < static_cast<int>(m.size()); ++i) {
        for (int j = 0; j < static_cast<int>(m[static_cast<size_t>(i)].size()); ++j) {
            const Scalar& x = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (x.c != 0) entries.push_back(MapEntry{i, j, x});
        }
    }
    (void)r;
    return makeMap(std::move(src), std::move(tgt), deg, std::move(entries));
}

void accumulate(const CoefficientRing& r, Scalar& slot, const Scalar& add) {
    if (add.c == 0) return;
    slot = (slot.c == 0) ? add : addScalar(r, slot, add);
}

}  // namespace

SnfResult smithNormalForm(const HomogeneousMap& f) {
    if (!f.src.isFree() || !f.tgt.isFree()) {
        throw hypothesisViolation("smith normal form requires free source and target");
    }
    const CoefficientRing& r = f.ring();
    const int nr = static_cast<int>(f.tgt.gens.size());
    const int nc = static_cast<int>(f.src.gens.size());

    Dense a = denseOf(f);
    Dense u = denseIdentity(nr);
    Dense uinv = denseIdentity(nr);
    Dense v = denseIdentity(nc);
    Dense vinv = denseIdentity(nc);
    std::vector<Generator> tgtP = f.tgt.gens;
    std::vector<Generator> srcP = f.src.gens;

    auto rowSwap = [&](int i, int j) {
        if (i == j) return;
        std::swap(a[static_cast<size_t>(i)], a[static_cast<size_t>(j)]);
        std::swap(uinv[static_cast<size_t>(i)], uinv[static_cast<size_t>(j)]);
        for (int k = 0; k < nr; ++k) {
            std::swap(u[static_cast<size_t>(k)][static_cast<size_t>(i)],
                      u[static_cast<size_t>(k)][static_cast<size_t>(j)]);
        }
        std::swap(tgtP[static_cast<size_t>(i)], tgtP[static_cast<size_t>(j)]);
    };
    auto colSwap = [&](int i, int j) {
        if (i == j) return;
        for (int k = 0; k < nr; ++k) {
            std::swap(a[static_cast<size_t>(k)][static_cast<size_t>(i)],
                      a[static_cast<size_t>(k)][static_cast<size_t>(j)]);
        }
        std::swap(v[static_cast<size_t>(i)], v[static_cast<size_t>(j)]);
        for (int k = 0; k < nc; ++k) {
            std::swap(vinv[static_cast<size_t>(k)][static_cast<size_t>(i)],
                      vinv[static_cast<size_t>(k)][static_cast<size_t>(j)]);
        }
        std::swap(srcP[static_cast<size_t>(i)], srcP[static_cast<size_t>(j)]);
    };
    // row j -= lambda * row i, applied to the working matrix and mirrored
    // into u (column i += lambda * column j) and uinv (row j -= lambda * row i).
    auto rowAdd = [&](int j, int i, const Scalar& lambda) {
        Scalar neg = negScalar(r, lambda);
        for (int k = 0; k < nc; ++k) {
            if (a[static_cast<size_t>(i)][static_cast<size_t>(k)].c == 0) continue;
            accumulate(r, a[static_cast<size_t>(j)][static_cast<size_t>(k)],
                       mulScalar(r, neg, a[static_cast<size_t>(i)][static_cast<size_t>(k)]));
        }
        for (int k = 0; k < nr; ++k) {
            if (uinv[static_cast<size_t>(i)][static_cast<size_t>(k)].c == 0) continue;
            accumulate(r, uinv[static_cast<size_t>(j)][static_cast<size_t>(k)],
                       mulScalar(r, neg, uinv[static_cast<size_t>(i)][static_cast<size_t>(k)]));
        }
        for (int k = 0; k < nr; ++k) {
            if (u[static_cast<size_t>(k)][static_cast<size_t>(j)].c == 0) continue;
            accumulate(r, u[static_cast<size_t>(k)][static_cast<size_t>(i)],
                       mulScalar(r, lambda, u[static_cast<size_t>(k)][static_cast<size_t>(j)]));
        }
    };
    // col j -= lambda * col i, mirrored into v (row i += lambda * row j) and
    // vinv (col j -= lambda * col i).
    auto colAdd = [&](int j, int i, const Scalar& lambda) {
        Scalar neg = negScalar(r, lambda);
        for (int k = 0; k < nr; ++k) {
            if (a[static_cast<size_t>(k)][static_cast<size_t>(i)].c == 0) continue;
            accumulate(r, a[static_cast<size_t>(k)][static_cast<size_t>(j)],
                       mulScalar(r, neg, a[static_cast<size_t>(k)][static_cast<size_t>(i)]));
        }
        for (int k = 0; k < nc; ++k) {
            if (v[static_cast<size_t>(j)][static_cast<size_t>(k)].c == 0) continue;
            accumulate(r, v[static_cast<size_t>(i)][static_cast<size_t>(k)],
                       mulScalar(r, lambda, v[static_cast<size_t>(j)][static_cast<size_t>(k)]));
        }
        for (int k = 0; k < nc; ++k) {
            if (vinv[static_cast<size_t>(k)][static_cast<size_t>(i)].c == 0) continue;
            accumulate(r, vinv[static_cast<size_t>(k)][static_cast<size_t>(j)],
                       mulScalar(r, neg, vinv[static_cast<size_t>(k)][static_cast<size_t>(i)]));
        }
    };
    auto rowScale = [&](int i, long long c) {
        Scalar s{normMod(c, r.l), 0, 0};
        Scalar sInv{invMod(c, r.l), 0, 0};
        for (int k = 0; k < nc; ++k) {
            Scalar& x = a[static_cast<size_t>(i)][static_cast<size_t>(k)];
            if (x.c != 0) x = mulScalar(r, s, x);
        }
        for (int k = 0; k < nr; ++k) {
            Scalar& x = uinv[static_cast<size_t>(i)][static_cast<size_t>(k)];
            if (x.c != 0) x = mulScalar(r, s, x);
        }
        for (int k = 0; k < nr; ++k) {
            Scalar& x = u[static_cast<size_t>(k)][static_cast<size_t>(i)];
            if (x.c != 0) x = mulScalar(r, sInv, x);
        }
    };

    const int tmax = std::min(nr, nc);
    int rank = 0;
    std::vector<long long> diagExp;
    for (int t = 0; t < tmax; ++t) {
        // Pivot: least tau exponent among remaining entries keeps every
        // elimination quotient inside the ring.
        int pr = -1;
        int pc = -1;
        for (int i = t; i < nr; ++i) {
            for (int j = t; j < nc; ++j) {
                const Scalar& x = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (x.c == 0) continue;
                if (pr < 0 || x.a < a[static_cast<size_t>(pr)][static_cast<size_t>(pc)].a) {
                    pr = i;
                    pc = j;
                }
            }
        }
        if (pr < 0) break;
        rowSwap(t, pr);
        colSwap(t, pc);
        rowScale(t, invMod(a[static_cast<size_t>(t)][static_cast<size_t>(t)].c, r.l));
        const Scalar pivot = a[static_cast<size_t>(t)][static_cast<size_t>(t)];
        for (int i = t + 1; i < nr; ++i) {
            const Scalar& x = a[static_cast<size_t>(i)][static_cast<size_t>(t)];
            if (x.c != 0) rowAdd(i, t, divScalar(r, x, pivot));
        }
        for (int j = t + 1; j < nc; ++j) {
            const Scalar& x = a[static_cast<size_t>(t)][static_cast<size_t>(j)];
            if (x.c != 0) colAdd(j, t, divScalar(r, x, pivot));
        }
        diagExp.push_back(pivot.a);
        ++rank;
    }
    for (size_t i = 1; i < diagExp.size(); ++i) {
        if (diagExp[i - 1] > diagExp[i]) {
            throw internalError("diagonal tau exponents came out unsorted");
        }
    }

    GradedModule srcM{r, srcP};
    GradedModule tgtM{r, tgtP};
    SnfResult out;
    out.U = mapOf(r, u, tgtM, f.tgt, Bidegree{0, 0});
    out.Uinv = mapOf(r, uinv, f.tgt, tgtM, Bidegree{0, 0});
    out.D = mapOf(r, a, srcM, tgtM, f.deg);
    out.V = mapOf(r, v, f.src, srcM, Bidegree{0, 0});
    out.Vinv = mapOf(r, vinv, srcM, f.src, Bidegree{0, 0});
    out.rank = rank;
    out.diagTauExponents = std::move(diagExp);
    return out;
}

}  // namespace motx
