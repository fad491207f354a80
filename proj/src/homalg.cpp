#include "motx/homalg.hpp"

#include "motx/errors.hpp"

#include <algorithm>
#include <map>

namespace motx {

namespace {

GradedModule freeCover(const GradedModule& m) {
    GradedModule out{m.ring, m.gens};
    for (auto& g : out.gens) g.torsion = 0;
    return out;
}

// [f | g] on a shared target; g's source generators follow f's.
HomogeneousMap blockCols(const HomogeneousMap& f, const HomogeneousMap& g) {
    if (f.tgt.gens != g.tgt.gens || f.deg != g.deg) {
        throw internalError("column blocks disagree on target or degree");
    }
    GradedModule src = directSum(f.src, g.src);
    std::vector<MapEntry> entries = f.entries;
    const int offset = static_cast<int>(f.src.gens.size());
    for (const auto& e : g.entries) {
        entries.push_back(MapEntry{e.row, e.col + offset, e.x});
    }
    return makeMap(std::move(src), f.tgt, f.deg, std::move(entries));
}

// Restriction of a map to the rows of the leading target summand.
HomogeneousMap leadingRows(const HomogeneousMap& f, const GradedModule& head) {
    std::vector<MapEntry> entries;
    const int n = static_cast<int>(head.gens.size());
    for (const auto& e : f.entries) {
        if (e.row < n) entries.push_back(e);
    }
    return makeMap(f.src, head, f.deg, std::move(entries));
}

}  // namespace

Presentation presentation(const GradedModule& m) {
    Presentation p;
    p.f0 = freeCover(m);
    p.f1 = GradedModule{m.ring, {}};
    std::vector<MapEntry> entries;
    for (int i = 0; i < static_cast<int>(m.gens.size()); ++i) {
        const Generator& g = m.gens[static_cast<size_t>(i)];
        if (g.torsion == 0) continue;
        const int col = static_cast<int>(p.f1.gens.size());
        p.f1.gens.push_back(Generator{Bidegree{g.deg.p, g.deg.q - g.torsion}, 0});
        entries.push_back(MapEntry{i, col, Scalar{1, g.torsion, 0}});
    }
    p.rho = makeMap(p.f1, p.f0, Bidegree{0, 0}, std::move(entries));
    return p;
}

KernelResult freeKernel(const HomogeneousMap& f) {
    SnfResult s = smithNormalForm(f);
    const int nc = static_cast<int>(f.src.gens.size());
    GradedModule k{f.ring(), {}};
    for (int j = s.rank; j < nc; ++j) {
        k.gens.push_back(s.D.src.gens[static_cast<size_t>(j)]);
    }
    std::vector<MapEntry> entries;
    for (const auto& e : s.Vinv.entries) {
        if (e.col >= s.rank) entries.push_back(MapEntry{e.row, e.col - s.rank, e.x});
    }
    KernelResult out;
    out.module = k;
    out.inclusion = makeMap(std::move(k), f.src, Bidegree{0, 0}, std::move(entries));
    return out;
}

CokernelResult presentCokernelFree(const HomogeneousMap& f) {
    SnfResult s = smithNormalForm(f);
    const int nr = static_cast<int>(f.tgt.gens.size());
    GradedModule coker{f.ring(), {}};
    std::vector<int> survivorOf(static_cast<size_t>(nr), -1);
    for (int i = 0; i < nr; ++i) {
        long long torsion = 0;
        if (i < s.rank) {
            torsion = s.diagTauExponents[static_cast<size_t>(i)];
            // Unit diagonal entries kill their generator; over a localized
            // ring every nonzero scalar is a unit.
            if (torsion == 0 || f.ring().tauInverted) continue;
        }
        survivorOf[static_cast<size_t>(i)] = static_cast<int>(coker.gens.size());
        Generator g = s.D.tgt.gens[static_cast<size_t>(i)];
        g.torsion = torsion;
        coker.gens.push_back(g);
    }
    std::vector<MapEntry> proj;
    for (const auto& e : s.Uinv.entries) {
        const int row = survivorOf[static_cast<size_t>(e.row)];
        if (row >= 0) proj.push_back(MapEntry{row, e.col, e.x});
    }
    std::vector<MapEntry> sect;
    for (const auto& e : s.U.entries) {
        const int col = survivorOf[static_cast<size_t>(e.col)];
        if (col >= 0) sect.push_back(MapEntry{e.row, col, e.x});
    }
    CokernelResult out;
    out.module = coker;
    out.projection = makeMap(f.tgt, coker, Bidegree{0, 0}, std::move(proj));
    out.section = makeMap(freeCover(coker), f.tgt, Bidegree{0, 0}, std::move(sect));
    return out;
}

namespace {

// Shared by kernel and cokernel: the composite relations-plus-map block
// [fhat | rhoN] on free covers, with the relation block shifted so the
// whole map is homogeneous of degree deg(f).
HomogeneousMap presentedBlock(const HomogeneousMap& f, const Presentation& pM,
                              const Presentation& pN) {
    HomogeneousMap fhat = makeMap(pM.f0, pN.f0, f.deg, f.entries);
    HomogeneousMap rhoShift =
        makeMap(shifted(pN.f1, -f.deg), pN.f0, f.deg, pN.rho.entries);
    return blockCols(fhat, rhoShift);
}

}  // namespace

KernelResult kernel(const HomogeneousMap& f) {
    Presentation pM = presentation(f.src);
    Presentation pN = presentation(f.tgt);
    HomogeneousMap g = presentedBlock(f, pM, pN);
    KernelResult kb = freeKernel(g);
    HomogeneousMap h = leadingRows(kb.inclusion, pM.f0);
    HomogeneousMap gw = blockCols(h, pM.rho);
    KernelResult wb = freeKernel(gw);
    HomogeneousMap w = leadingRows(wb.inclusion, kb.module);
    CokernelResult ck = presentCokernelFree(w);
    HomogeneousMap lift = compose(h, ck.section);
    KernelResult out;
    out.module = ck.module;
    out.inclusion = makeMap(ck.module, f.src, Bidegree{0, 0}, lift.entries);
    return out;
}

CokernelResult cokernel(const HomogeneousMap& f) {
    Presentation pM = presentation(f.src);
    Presentation pN = presentation(f.tgt);
    HomogeneousMap g = presentedBlock(f, pM, pN);
    CokernelResult ck = presentCokernelFree(g);
    CokernelResult out;
    out.module = ck.module;
    out.projection = makeMap(f.tgt, ck.module, Bidegree{0, 0}, ck.projection.entries);
    out.section = makeMap(ck.section.src, f.tgt, Bidegree{0, 0}, ck.section.entries);
    return out;
}

HomogeneousMap factorThrough(const HomogeneousMap& f, const HomogeneousMap& g) {
    if (f.tgt.gens != g.tgt.gens) {
        throw internalError("factorThrough targets do not match");
    }
    const CoefficientRing& r = f.ring();
    const Bidegree hdeg = f.deg - g.deg;
    std::vector<MapEntry> entries;
    for (int i = 0; i < static_cast<int>(f.src.gens.size()); ++i) {
        const Bidegree d = f.src.gens[static_cast<size_t>(i)].deg + hdeg;
        std::vector<SliceMonomial> cols = sliceBasis(g.src, d);
        std::vector<SliceMonomial> rows = sliceBasis(g.tgt, d + g.deg);
        FpMat a = sliceMatrix(g, d);
        std::vector<int> b(rows.size(), 0);
        for (const auto& e : f.entries) {
            if (e.col != i) continue;
            bool found = false;
            for (size_t rr = 0; rr < rows.size(); ++rr) {
                if (rows[rr].gen == e.row && rows[rr].a == e.x.a && rows[rr].b == e.x.b) {
                    b[rr] = normMod(b[rr] + e.x.c, r.l);
                    found = true;
                    break;
                }
            }
            if (!found) throw internalError("image monomial missing from target slice");
        }
        std::vector<int> x;
        if (!solveFp(a, b, x)) {
            throw hypothesisViolation("map does not factor through the given map");
        }
        for (size_t j = 0; j < cols.size(); ++j) {
            if (x[j] == 0) continue;
            entries.push_back(MapEntry{cols[j].gen, i, Scalar{x[j], cols[j].a, cols[j].b}});
        }
    }
    return makeMap(f.src, g.src, hdeg, std::move(entries));
}

bool isIsomorphism(const HomogeneousMap& f) {
    return kernel(f).module.isZero() && cokernel(f).module.isZero();
}

GradedModule homologyAt(const HomogeneousMap& incoming, const HomogeneousMap& outgoing) {
    KernelResult k = kernel(outgoing);
    HomogeneousMap lift = factorThrough(incoming, k.inclusion);
    return cokernel(lift).module;
}

IdempotentImage imageOfIdempotent(const HomogeneousMap& e) {
    if (e.src.gens != e.tgt.gens || e.deg != Bidegree{0, 0}) {
        throw malformedInput("idempotent must be a degree-zero self map");
    }
    if (!mapsEqual(compose(e, e), e)) {
        throw hypothesisViolation("map is not idempotent");
    }
    HomogeneousMap complement = addMaps(identityMap(e.src), negate(e));
    KernelResult k = kernel(complement);
    IdempotentImage out;
    out.module = k.module;
    out.inclusion = k.inclusion;
    out.retraction = factorThrough(e, k.inclusion);
    if (!mapsEqual(compose(out.inclusion, out.retraction), e) ||
        !mapsEqual(compose(out.retraction, out.inclusion), identityMap(out.module))) {
        throw internalError("idempotent splitting failed its defining identities");
    }
    return out;
}

std::vector<GradedModule> enumerateExtensions(const GradedModule& sub, const GradedModule& quot,
                                              size_t maxCandidates) {
    if (sub.ring.l != quot.ring.l || sub.ring.kind != quot.ring.kind) {
        throw malformedInput("extension endpoints live over different coefficient rings");
    }
    const CoefficientRing& r = sub.ring;
    Presentation pa = presentation(sub);
    Presentation pb = presentation(quot);
    GradedModule f = directSum(pa.f0, pb.f0);
    GradedModule rel = directSum(pa.f1, pb.f1);
    const int rowOff = static_cast<int>(pa.f0.gens.size());
    const int colOff = static_cast<int>(pa.f1.gens.size());
    std::vector<MapEntry> base = pa.rho.entries;
    for (const auto& e : pb.rho.entries) {
        base.push_back(MapEntry{e.row + rowOff, e.col + colOff, e.x});
    }
    // Fill-in slots: quotient relations may hit sub generators. Entries that
    // the sub torsion kills are redundant fill-ins and are skipped.
    struct Slot {
        int row;
        int col;
        long long a;
        long long b;
    };
    std::vector<Slot> slots;
    for (int i = 0; i < static_cast<int>(pa.f0.gens.size()); ++i) {
        for (int j = 0; j < static_cast<int>(pb.f1.gens.size()); ++j) {
            auto forced = forcedExponents(r, pb.f1.gens[static_cast<size_t>(j)].deg,
                                          pa.f0.gens[static_cast<size_t>(i)].deg, Bidegree{0, 0});
            if (!forced) continue;
            const long long torsion = sub.gens[static_cast<size_t>(i)].torsion;
            if (torsion > 0 && forced->first >= torsion) continue;
            slots.push_back(Slot{i, j + colOff, forced->first, forced->second});
        }
    }
    unsigned long long total = 1;
    for (size_t s = 0; s < slots.size(); ++s) {
        total *= static_cast<unsigned long long>(r.l);
        if (total > maxCandidates) {
            throw hypothesisViolation("extension search space exceeds the candidate cap");
        }
    }
    std::vector<GradedModule> reps;
    std::vector<long long> choice(slots.size(), 0);
    for (unsigned long long it = 0; it < total; ++it) {
        std::vector<MapEntry> entries = base;
        for (size_t s = 0; s < slots.size(); ++s) {
            if (choice[s] == 0) continue;
            entries.push_back(MapEntry{slots[s].row, slots[s].col,
                                       Scalar{static_cast<int>(choice[s]), slots[s].a, slots[s].b}});
        }
        GradedModule e =
            presentCokernelFree(makeMap(rel, f, Bidegree{0, 0}, std::move(entries))).module;
        bool seen = false;
        for (const auto& known : reps) {
            if (isoEqual(known, e)) {
                seen = true;
                break;
            }
        }
        if (!seen) reps.push_back(std::move(e));
        for (size_t s = 0; s < slots.size(); ++s) {
            if (++choice[s] < r.l) break;
            choice[s] = 0;
        }
    }
    return reps;
}

}  // namespace motx
