#include "motx/chart.hpp"

#include "motx/errors.hpp"
#include "motx/homalg.hpp"
#include "motx/serialize.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <tuple>

namespace motx {

namespace {

bool sameUnderlying(const GradedModule& a, const GradedModule& b) {
    return a.ring == b.ring && a.gens == b.gens;
}

std::string keyText(int s, long long t, long long u) {
    std::ostringstream os;
    os << "s=" << s << " t=" << t << " u=" << u;
    return os.str();
}

// Rank of the slice at (s, t, u) as far as the page knows it: exact inside
// the computed window, zero above a certified vanishing line, unknown beyond.
std::optional<long long> knownRankAt(const ChartPage& page, int s, long long t, long long u) {
    if (s < 0) return 0;
    long long stem = t - s;
    if (s <= page.window.sMax && stem <= page.window.tMax && std::llabs(u) <= page.window.uMax) {
        auto it = page.entries.find(ChartKey{s, t});
        if (it == page.entries.end()) return 0;
        return sliceDimension(it->second.module, {stem, u});
    }
    if (page.line && strictlyAboveLine(*page.line, s, stem)) return 0;
    return std::nullopt;
}

// The first page at which a differential touching the slice could be nonzero
// (active) or leaves the known region (blocked). Pages before the event leave
// the slice untouched, so scanning ahead of the current page stays valid.
struct SliceScan {
    std::optional<int> eventPage;
    bool blocked = false;
    std::string text;
};

SliceScan scanSlice(const ChartPage& page, int s, long long t, long long u, int rFrom) {
    SliceScan out;
    auto record = [&](int rp, bool blocked, std::string txt) {
        if (!out.eventPage || rp < *out.eventPage ||
            (rp == *out.eventPage && blocked && !out.blocked)) {
            out.eventPage = rp;
            out.blocked = blocked;
            out.text = std::move(txt);
        }
    };
    for (int rp = rFrom;; ++rp) {
        int ts = s + rp;
        long long tt = t + rp - 1;
        auto kr = knownRankAt(page, ts, tt, u);
        if (kr && *kr > 0) {
            record(rp, false, "r=" + std::to_string(rp) + " " + keyText(s, t, u));
            break;
        }
        if (!kr) {
            record(rp, true, "r=" + std::to_string(rp) + " " + keyText(s, t, u));
            break;
        }
        // A zero beyond the window edge comes from the vanishing line; the
        // target only moves further above it on later pages.
        if (ts > page.window.sMax) break;
    }
    for (int rp = rFrom; rp <= s; ++rp) {
        int ss = s - rp;
        long long st = t - rp + 1;
        auto kr = knownRankAt(page, ss, st, u);
        if (!kr) {
            record(rp, true, "r=" + std::to_string(rp) + " " + keyText(ss, st, u));
            break;
        }
        if (*kr > 0) {
            record(rp, false, "r=" + std::to_string(rp) + " " + keyText(ss, st, u));
            break;
        }
    }
    return out;
}

std::vector<long long> nonzeroWeights(const GradedModule& m, long long stem, long long uMax) {
    std::vector<long long> out;
    for (long long u = -uMax; u <= uMax; ++u) {
        if (sliceDimension(m, {stem, u}) > 0) out.push_back(u);
    }
    return out;
}

std::string joinCapped(const std::vector<std::string>& parts, size_t cap) {
    std::ostringstream os;
    for (size_t i = 0; i < parts.size() && i < cap; ++i) {
        if (i) os << "; ";
        os << parts[i];
    }
    if (parts.size() > cap) os << "; and " << (parts.size() - cap) << " more";
    return os.str();
}

// Applies the supplied page-r differentials and replaces every touched entry
// by its homology. Entries the differentials do not reach are carried over.
void executePage(ChartPage& cur, int rStar, const ExtWindow& region,
                 std::map<ChartKey, int>& lastTouched) {
    std::map<ChartKey, const ChartDifferential*> supplied;
    for (const auto& d : cur.differentials) {
        if (d.r != rStar) continue;
        ChartKey srcKey{d.s, d.t};
        ChartKey tgtKey{d.s + rStar, d.t + rStar - 1};
        auto src = cur.entries.find(srcKey);
        if (src == cur.entries.end()) {
            throw malformedInput("differential source is not a chart entry at " +
                                 keyText(d.s, d.t, 0));
        }
        if (d.map.deg != Bidegree{-1, 0}) {
            throw malformedInput("chart differentials must have bidegree (-1, 0)");
        }
        if (!sameUnderlying(d.map.src, src->second.module)) {
            throw malformedInput("differential does not start at the entry module at " +
                                 keyText(d.s, d.t, 0));
        }
        auto tgt = cur.entries.find(tgtKey);
        if (tgt == cur.entries.end()) {
            if (!d.map.tgt.isZero() || !d.map.entries.empty()) {
                throw malformedInput("differential lands outside the chart at " +
                                     keyText(tgtKey.s, tgtKey.t, 0));
            }
        } else if (!sameUnderlying(d.map.tgt, tgt->second.module)) {
            throw malformedInput("differential does not end at the entry module at " +
                                 keyText(tgtKey.s, tgtKey.t, 0));
        }
        validateMap(d.map);
        if (supplied.count(srcKey)) {
            throw malformedInput("two differentials supplied from " + keyText(d.s, d.t, 0));
        }
        supplied[srcKey] = &d;
    }

    // Every differential with a potentially nonzero target inside the window
    // must have been supplied.
    std::vector<std::string> missing;
    for (const auto& [key, entry] : cur.entries) {
        long long stem = key.t - key.s;
        if (key.s > region.sMax || stem > region.tMax) continue;
        ChartKey tgtKey{key.s + rStar, key.t + rStar - 1};
        auto tgt = cur.entries.find(tgtKey);
        if (tgt == cur.entries.end() || supplied.count(key)) continue;
        for (long long u = -region.uMax; u <= region.uMax; ++u) {
            if (sliceDimension(entry.module, {stem, u}) > 0 &&
                sliceDimension(tgt->second.module, {stem - 1, u}) > 0) {
                missing.push_back("r=" + std::to_string(rStar) + " " + keyText(key.s, key.t, u));
            }
        }
    }
    if (!missing.empty()) {
        throw incompleteInformation("undetermined differentials remain: " + joinCapped(missing, 8));
    }

    for (const auto& [key, d] : supplied) {
        ChartKey tgtKey{key.s + rStar, key.t + rStar - 1};
        auto next = supplied.find(tgtKey);
        if (next == supplied.end()) continue;
        HomogeneousMap square = compose(next->second->map, d->map);
        if (!square.isZero()) {
            throw malformedInput("supplied differentials do not square to zero at " +
                                 keyText(key.s, key.t, 0));
        }
    }

    std::set<ChartKey> touched;
    for (const auto& [key, d] : supplied) {
        touched.insert(key);
        touched.insert(ChartKey{key.s + rStar, key.t + rStar - 1});
    }
    std::map<ChartKey, ChartEntry> next;
    for (const auto& [key, entry] : cur.entries) {
        if (!touched.count(key)) {
            next[key] = entry;
            continue;
        }
        ChartKey inKey{key.s - rStar, key.t - rStar + 1};
        auto din = supplied.find(inKey);
        auto dout = supplied.find(key);
        HomogeneousMap incoming = (din != supplied.end())
                                      ? din->second->map
                                      : zeroMap(zeroModule(cur.ring), entry.module, {-1, 0});
        HomogeneousMap outgoing = (dout != supplied.end())
                                      ? dout->second->map
                                      : zeroMap(entry.module, zeroModule(cur.ring), {-1, 0});
        GradedModule h = normalized(homologyAt(incoming, outgoing));
        if (h.gens != entry.module.gens) lastTouched[key] = rStar;
        if (!h.isZero()) next[key] = ChartEntry{std::move(h), false};
    }
    cur.entries = std::move(next);
    std::vector<ChartDifferential> keep;
    for (auto& d : cur.differentials) {
        if (d.r != rStar) keep.push_back(std::move(d));
    }
    cur.differentials = std::move(keep);
}

}  // namespace

ChartPage chartFromExt(const ExtResult& ext, int n) {
    if (n < 0) throw malformedInput("Morava height must be nonnegative");
    ChartPage page;
    page.ring = ext.ring;
    page.n = n;
    page.window = ext.window;
    page.r = 2;
    for (int s = 0; s < static_cast<int>(ext.byS.size()); ++s) {
        std::map<long long, std::vector<Generator>> byStem;
        for (const auto& g : ext.byS[static_cast<size_t>(s)].gens) byStem[g.deg.p].push_back(g);
        for (auto& [stem, gens] : byStem) {
            GradedModule m{ext.ring, std::move(gens)};
            page.entries[ChartKey{s, stem + s}] = ChartEntry{normalized(std::move(m)), false};
        }
    }
    page.provenance.push_back("page 2 assembled from a computed Ext table");
    return page;
}

long long chartRankAt(const ChartPage& page, int s, long long t, long long u) {
    auto it = page.entries.find(ChartKey{s, t});
    if (it == page.entries.end()) return 0;
    return sliceDimension(it->second.module, {t - s, u});
}

ChartPage degreeReasonPrune(const ChartPage& page) {
    ChartPage out = page;
    out.pruned.clear();
    for (auto& [key, entry] : out.entries) {
        bool quiet = true;
        long long stem = key.t - key.s;
        for (long long u : nonzeroWeights(entry.module, stem, page.window.uMax)) {
            SliceScan sc = scanSlice(page, key.s, key.t, u, page.r);
            if (sc.eventPage) {
                quiet = false;
                break;
            }
        }
        entry.permanent = quiet;
        if (quiet) {
            out.pruned.push_back(keyText(key.s, key.t, 0) +
                                 ": every differential from page " + std::to_string(page.r) +
                                 " on has zero source or target");
        }
    }
    return out;
}

ChartPage applyVanishingLine(const ChartPage& page, const VanishingLine& line) {
    for (const auto& [key, entry] : page.entries) {
        if (!entry.module.isZero() && strictlyAboveLine(line, key.s, key.t - key.s)) {
            throw hypothesisViolation("vanishing line would delete the nonzero entry at " +
                                      keyText(key.s, key.t, 0));
        }
    }
    ChartPage out = page;
    out.line = line;
    out.provenance.push_back("vanishing line slope " + toText(line.slope) + " intercept " +
                             toText(line.intercept) + " certified by caller");
    return out;
}

EInfinityResult runToEInfinity(const ChartPage& page, const ExtWindow& window) {
    window.validate();
    if (window.sMax > page.window.sMax || window.tMax > page.window.tMax ||
        window.uMax > page.window.uMax) {
        throw malformedInput("certification window exceeds the computed window");
    }
    ChartPage cur = page;
    std::map<ChartKey, int> lastTouched;
    for (;;) {
        std::optional<int> eventPage;
        std::vector<std::string> blockedList;
        for (const auto& [key, entry] : cur.entries) {
            long long stem = key.t - key.s;
            if (key.s > window.sMax || stem > window.tMax) continue;
            for (long long u : nonzeroWeights(entry.module, stem, window.uMax)) {
                SliceScan sc = scanSlice(cur, key.s, key.t, u, cur.r);
                if (!sc.eventPage) continue;
                if (!eventPage || *sc.eventPage < *eventPage) {
                    eventPage = sc.eventPage;
                    blockedList.clear();
                }
                if (*sc.eventPage == *eventPage && sc.blocked) blockedList.push_back(sc.text);
            }
        }
        if (!blockedList.empty()) {
            throw incompleteInformation("undetermined differentials remain: " +
                                        joinCapped(blockedList, 8));
        }
        if (!eventPage) break;
        executePage(cur, *eventPage, window, lastTouched);
        cur.r = *eventPage + 1;
    }

    EInfinityResult res;
    res.certificate.finalPage = cur.r;
    size_t resolved = 0;
    for (const auto& [key, ignored] : lastTouched) {
        if (!cur.entries.count(key)) ++resolved;
    }
    if (resolved > 0) {
        res.certificate.notes.push_back(std::to_string(resolved) +
                                        " entries resolved to zero during the run");
    }
    for (auto& [key, entry] : cur.entries) {
        long long stem = key.t - key.s;
        if (key.s > window.sMax || stem > window.tMax) continue;
        entry.permanent = true;
        auto it = lastTouched.find(key);
        res.certificate.stabilizedAt[key] = (it == lastTouched.end()) ? page.r : it->second + 1;
    }
    cur.provenance.push_back("stable from page " + std::to_string(cur.r) + " on");
    res.page = std::move(cur);
    return res;
}

namespace {

struct AbutmentRecord {
    long long p = 0;
    long long u = 0;
    long long k = 0;  // torsion order, 0 when free
    int s = 0;

    auto ordering() const { return std::tie(p, u, k, s); }
    bool operator<(const AbutmentRecord& o) const { return ordering() < o.ordering(); }
};

// Checks that the records organize into v_n towers (filtration step 1, degree
// step (2(l^n-1), l^n-1), constant torsion) that persist to the window edge.
// Fills seeds on success.
bool peelTowers(const ChartPage& einf, const std::vector<AbutmentRecord>& recs,
                std::vector<AbutmentRecord>& seeds) {
    long long pw = 1;
    for (int i = 0; i < einf.n; ++i) pw *= einf.ring.l;
    long long vp = 2 * (pw - 1);
    long long vu = pw - 1;
    std::map<std::tuple<int, long long, long long, long long>, int> expected;
    std::vector<AbutmentRecord> sorted = recs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const AbutmentRecord& a, const AbutmentRecord& b) { return a.s < b.s; });
    for (const auto& r : sorted) {
        auto self = std::make_tuple(r.s, r.p, r.u, r.k);
        auto it = expected.find(self);
        if (it != expected.end() && it->second > 0) {
            --it->second;
        } else {
            seeds.push_back(r);
        }
        long long stem = r.p + vp;
        long long wu = r.u + vu;
        if (r.s + 1 <= einf.window.sMax && stem <= einf.window.tMax &&
            std::llabs(wu) <= einf.window.uMax) {
            ++expected[std::make_tuple(r.s + 1, r.p + vp, r.u + vu, r.k)];
        }
    }
    for (const auto& [key, count] : expected) {
        if (count > 0) {
            seeds.clear();
            return false;
        }
    }
    return true;
}

}  // namespace

AbutmentModule assembleAbutment(const ChartPage& einf) {
    for (const auto& [key, entry] : einf.entries) {
        if (!entry.permanent) {
            throw hypothesisViolation("abutment assembly needs a certified page; entry at " +
                                      keyText(key.s, key.t, 0) + " is not marked permanent");
        }
    }
    AbutmentModule ab;
    ab.n = einf.n;
    ab.module.ring = einf.ring;

    std::vector<AbutmentRecord> recs;
    for (const auto& [key, entry] : einf.entries) {
        for (const auto& g : entry.module.gens) {
            recs.push_back(AbutmentRecord{g.deg.p, g.deg.q, g.torsion, key.s});
        }
    }
    if (recs.empty()) {
        ab.notes.push_back("zero page, zero abutment");
        return ab;
    }

    std::vector<AbutmentRecord> basis;
    if (einf.n >= 1) {
        std::vector<AbutmentRecord> seeds;
        if (peelTowers(einf, recs, seeds)) {
            ab.vnFree = true;
            basis = std::move(seeds);
            ab.notes.push_back("v_n towers persist to the window edge; generators listed once per tower");
        } else {
            ab.notes.push_back("v_n structure is not forced by the page; reporting the associated graded");
        }
    }
    if (!ab.vnFree) basis = recs;
    std::sort(basis.begin(), basis.end());
    for (const auto& r : basis) {
        ab.module.gens.push_back(Generator{{r.p, r.u}, r.k});
        ab.filtrations.push_back(r.s);
    }
    ab.module.validate();

    // A hidden tau extension needs a torsion generator whose bottom weight
    // meets another generator one filtration or more higher; only those pairs
    // leave more than one normal form consistent with the page.
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].k == 0) continue;
        for (size_t j = 0; j < basis.size(); ++j) {
            if (i == j) continue;
            if (basis[j].p == basis[i].p && basis[j].u == basis[i].u - basis[i].k &&
                basis[j].s > basis[i].s) {
                pairs.emplace_back(i, j);
            }
        }
    }
    if (pairs.empty()) return ab;

    ab.ambiguous = true;
    std::set<size_t> used;
    bool disjoint = true;
    for (const auto& [i, j] : pairs) {
        if (used.count(i) || used.count(j)) disjoint = false;
        used.insert(i);
        used.insert(j);
    }
    ab.candidates.push_back(normalized(ab.module));
    if (disjoint && pairs.size() <= 4) {
        for (size_t mask = 1; mask < (size_t{1} << pairs.size()); ++mask) {
            GradedModule cand{einf.ring, {}};
            std::set<size_t> glued;
            std::vector<Generator> extra;
            for (size_t b = 0; b < pairs.size(); ++b) {
                if (!(mask & (size_t{1} << b))) continue;
                auto [i, j] = pairs[b];
                glued.insert(i);
                glued.insert(j);
                long long k = basis[j].k == 0 ? 0 : basis[i].k + basis[j].k;
                extra.push_back(Generator{{basis[i].p, basis[i].u}, k});
            }
            for (size_t i = 0; i < basis.size(); ++i) {
                if (glued.count(i)) continue;
                cand.gens.push_back(Generator{{basis[i].p, basis[i].u}, basis[i].k});
            }
            for (const auto& g : extra) cand.gens.push_back(g);
            ab.candidates.push_back(normalized(std::move(cand)));
        }
        ab.notes.push_back("hidden tau extensions are possible; all candidate normal forms listed");
    } else {
        ab.notes.push_back("hidden tau extensions are possible; candidate set too large to enumerate");
    }
    return ab;
}

long long abutmentSliceRank(const AbutmentModule& ab, Bidegree d) {
    if (!ab.vnFree) return sliceDimension(ab.module, d);
    long long pw = 1;
    for (int i = 0; i < ab.n; ++i) pw *= ab.module.ring.l;
    long long vp = 2 * (pw - 1);
    long long vu = pw - 1;
    long long total = 0;
    for (const auto& g : ab.module.gens) {
        for (long long step = 0;; ++step) {
            long long pp = g.deg.p + step * vp;
            if (pp > d.p) break;
            if (pp != d.p) continue;
            long long uu = g.deg.q + step * vu;
            if (g.isFree() ? d.q <= uu : (uu - g.torsion < d.q && d.q <= uu)) ++total;
            break;
        }
    }
    return total;
}

std::string chartToJson(const std::vector<ChartPage>& pages) {
    if (pages.empty()) throw malformedInput("chart export needs at least one page");
    json j;
    j["prime"] = pages.front().ring.l;
    j["n"] = pages.front().n;
    j["window"] = json{{"sMax", pages.front().window.sMax},
                       {"tMax", pages.front().window.tMax},
                       {"uMax", pages.front().window.uMax}};
    json parr = json::array();
    for (const auto& page : pages) {
        json pj;
        pj["r"] = page.r;
        json entries = json::array();
        for (const auto& [key, entry] : page.entries) {
            long long stem = key.t - key.s;
            for (long long u = -page.window.uMax; u <= page.window.uMax; ++u) {
                long long rank = sliceDimension(entry.module, {stem, u});
                if (rank == 0) continue;
                entries.push_back(json{{"s", key.s}, {"t", key.t}, {"u", u}, {"rank", rank}});
            }
        }
        pj["entries"] = std::move(entries);
        json diffs = json::array();
        for (const auto& d : page.differentials) {
            json dj;
            dj["r"] = d.r;
            dj["s"] = d.s;
            dj["t"] = d.t;
            dj["map"] = mapToJson(d.map);
            diffs.push_back(std::move(dj));
        }
        pj["differentials"] = std::move(diffs);
        pj["pruned"] = page.pruned;
        parr.push_back(std::move(pj));
    }
    j["pages"] = std::move(parr);
    return canonicalDump(j);
}

std::string chartToTsv(const ChartPage& page) {
    std::ostringstream os;
    for (const auto& [key, entry] : page.entries) {
        long long stem = key.t - key.s;
        for (long long u = -page.window.uMax; u <= page.window.uMax; ++u) {
            long long rank = sliceDimension(entry.module, {stem, u});
            if (rank == 0) continue;
            os << key.s << "\t" << key.t << "\t" << u << "\t" << rank << "\n";
        }
    }
    return os.str();
}

std::string chartToSvg(const ChartPage& page) {
    const long long cell = 24;
    const long long margin = 30;
    long long stemMin = 0;
    long long stemMax = 0;
    for (const auto& [key, entry] : page.entries) {
        stemMin = std::min(stemMin, key.t - key.s);
        stemMax = std::max(stemMax, key.t - key.s);
    }
    long long width = 2 * margin + (stemMax - stemMin + 1) * cell;
    long long height = 2 * margin + (page.window.sMax + 1) * cell;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
       << width - margin << "\" y2=\"" << height - margin
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (const auto& [key, entry] : page.entries) {
        long long stem = key.t - key.s;
        long long rank = static_cast<long long>(entry.module.rank());
        long long cx = margin + (stem - stemMin) * cell + cell / 2;
        long long cy = height - margin - key.s * cell - cell / 2;
        long long radius = std::min(3 + 2 * (rank - 1), cell / 2 - 2);
        os << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << radius << "\">";
        os << "<title>s=" << key.s << " stem=" << stem << " generators:";
        for (const auto& g : entry.module.gens) {
            os << " u=" << g.deg.q;
            if (!g.isFree()) os << " tau^" << g.torsion;
        }
        os << "</title></circle>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string toText(const AbutmentModule& ab) {
    std::ostringstream os;
    if (ab.module.isZero()) return "0";
    if (ab.vnFree) {
        os << (ab.module.isFree() ? "free " : "") << "F_" << ab.module.ring.l << "[tau][v_"
           << ab.n << "]-module, rank " << ab.module.rank();
    } else {
        os << toText(ab.module);
    }
    os << "; filtrations";
    for (size_t i = 0; i < ab.filtrations.size(); ++i) os << " " << ab.filtrations[i];
    if (ab.ambiguous) {
        os << "; " << ab.candidates.size() << " candidate normal forms (hidden extensions)";
    }
    return os.str();
}

}  // namespace motx
