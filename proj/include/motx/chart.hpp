#pragma once

#include "motx/ext.hpp"

#include <map>
#include <optional>

namespace motx {

// Position of one entry: cohomological filtration s and the internal degree t
// in which the page-r differential moves by (r, r-1, 0). Generators inside an
// entry module are graded by (stem, weight) = (t - s, u), so every d_r is a
// tau-linear map of constant bidegree (-1, 0).
struct ChartKey {
    int s = 0;
    long long t = 0;

    auto operator<=>(const ChartKey&) const = default;
};

struct ChartEntry {
    GradedModule module;     // over F_l[tau], generators at (t - s, u)
    bool permanent = false;  // no differential on this or any later page can touch it
};

// A differential on page r out of the entry at (s, t), landing at
// (s + r, t + r - 1). The map must have bidegree (-1, 0).
struct ChartDifferential {
    int r = 2;
    int s = 0;
    long long t = 0;
    HomogeneousMap map;
};

struct ChartPage {
    CoefficientRing ring;
    int n = 0;  // Morava height used for the v_n bookkeeping of the abutment
    ExtWindow window;
    int r = 2;
    std::map<ChartKey, ChartEntry> entries;  // nonzero entries only
    std::vector<ChartDifferential> differentials;
    std::optional<VanishingLine> line;
    std::vector<std::string> pruned;
    std::vector<std::string> provenance;
};

// Page 2 of the chart for a computed Ext table: entry (s, t + s) collects the
// generators of Ext^s based at stem degree t.
ChartPage chartFromExt(const ExtResult& ext, int n);

long long chartRankAt(const ChartPage& page, int s, long long t, long long u);

// Marks the differentials whose target (for the current and every later page)
// is zero inside the window or lies above the certified vanishing line, and
// flags as permanent the entries all of whose differentials are so pruned.
ChartPage degreeReasonPrune(const ChartPage& page);

// Records a caller-certified vanishing line on the page. Throws when some
// nonzero entry lies strictly above the line.
ChartPage applyVanishingLine(const ChartPage& page, const VanishingLine& line);

struct StabilizationCertificate {
    int finalPage = 2;
    std::map<ChartKey, int> stabilizedAt;  // per surviving entry
    std::vector<std::string> notes;
};

struct EInfinityResult {
    ChartPage page;
    StabilizationCertificate certificate;
};

// Runs pages until no differential inside the given window can be nonzero.
// Differentials with a nonzero target must be supplied on the page; an
// unsupplied one raises an incomplete-information error listing (r, s, t, u).
EInfinityResult runToEInfinity(const ChartPage& page, const ExtWindow& window);

struct AbutmentModule {
    int n = 0;
    GradedModule module;           // over F_l[tau]; one generator per v_n tower when vnFree
    std::vector<int> filtrations;  // Adams filtration of each generator
    bool vnFree = false;           // the window forces a free v_n action on the generators
    bool ambiguous = false;
    std::vector<GradedModule> candidates;  // all normal forms consistent with the page
    std::vector<std::string> notes;
};

// Lifts a certified page to a filtered module. Forced tau and v_n
// multiplications are resolved; a hidden extension that the ranks do not
// determine is reported through the candidates list, never resolved by fiat.
AbutmentModule assembleAbutment(const ChartPage& einf);

long long abutmentSliceRank(const AbutmentModule& ab, Bidegree d);

std::string chartToJson(const std::vector<ChartPage>& pages);
std::string chartToTsv(const ChartPage& page);
std::string chartToSvg(const ChartPage& page);
std::string toText(const AbutmentModule& ab);

}  // namespace motx
