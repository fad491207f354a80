#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "motx/errors.hpp"
#include "motx/ext.hpp"

#include "support.hpp"

using namespace motx;
using namespace motx::testsupport;

namespace {

bool sameModule(const GradedModule& a, const GradedModule& b) {
    return a.ring == b.ring && normalized(a).gens == normalized(b).gens;
}

GradedModule randomConnectiveFree(std::mt19937_64& rng, int l, int maxGens, long long tSpan) {
    GradedModule m{ringFlTau(l), {}};
    const long long count = randIn(rng, 1, maxGens);
    for (long long i = 0; i < count; ++i) {
        m.gens.push_back({Bidegree{randIn(rng, 0, tSpan), randIn(rng, -4, 4)}, 0});
    }
    return m;
}

GradedModule bModule(int l) {
    return freeModule(ringFlTau(l), {{0, 0}, {1, 1}, {2, 1}, {3, 2}, {4, 2}, {5, 3}});
}

}  // namespace

TEST_CASE("rational arithmetic") {
    CHECK(rat(2, -4) == Rational{-1, 2});
    CHECK(rat(0, 7) == Rational{0, 1});
    CHECK(addRat(rat(1, 4), rat(1, 4)) == Rational{1, 2});
    CHECK(mulRat(rat(1, 4), rat(-35, 1)) == Rational{-35, 4});
    CHECK(ratLess(rat(-31, 4), rat(-7, 4)));
    CHECK(toText(rat(-31, 4)) == "-31/4");
    CHECK(toText(rat(3)) == "3");
    CHECK_THROWS_AS(rat(1, 0), EngineError);

    VanishingLine line{rat(1, 4), rat(0)};
    CHECK(strictlyAboveLine(line, 2, 4));
    CHECK_FALSE(strictlyAboveLine(line, 1, 4));
    CHECK_FALSE(strictlyAboveLine(line, 0, 4));
    CHECK(vanishingLineFor(3, 1).slope == Rational{1, 4});
    CHECK(vanishingLineFor(5, 1).slope == Rational{1, 8});
    CHECK(vanishingLineFor(3, 2).slope == Rational{1, 16});
}

TEST_CASE("ext over the exterior algebra on the point") {
    for (int l : {3, 5}) {
        ExtResult res = extOverLambdaQn(trivialQnModule(1, freeModule(ringFlTau(l), {{0, 0}})),
                                        {5, 40, 20});
        long long vp = 2 * (l - 1), vu = l - 1;
        for (int s = 0; s <= 5; ++s) {
            CHECK(sameModule(res.byS[static_cast<size_t>(s)],
                             freeModule(ringFlTau(l), {{vp * s, vu * s}})));
            CHECK(extRank(res, s, vp * s, vu * s) == 1);
            CHECK(extRank(res, s, vp * s, vu * s + 1) == 0);
            CHECK(extRank(res, s, vp * s, vu * s - 3) == 1);
            CHECK(extRank(res, s, vp * s + 1, vu * s) == 0);
        }
        CHECK(res.notes.empty());
        CHECK(resultRespectsLine(res, vanishingLineFor(l, 1)));
    }
}

TEST_CASE("ext of the rank six module is its basis times the periodic family") {
    ExtResult res = extOverLambdaQn(trivialQnModule(1, bModule(3)), {3, 20, 10});
    for (int s = 0; s <= 3; ++s) {
        CHECK(sameModule(res.byS[static_cast<size_t>(s)],
                         shifted(bModule(3), {4 * s, 2 * s})));
    }
    CHECK(resultRespectsLine(res, vanishingLineFor(3, 1)));

    ExtResult zero = extOverLambdaQn(trivialQnModule(1, zeroModule(ringFlTau(3))), {3, 20, 10});
    for (const auto& m : zero.byS) CHECK(m.isZero());
}

TEST_CASE("window truncation drops periodic classes past the degree bound") {
    ExtResult res = extOverLambdaQn(trivialQnModule(1, freeModule(ringFlTau(3), {{0, 0}})),
                                    {5, 10, 10});
    CHECK_FALSE(res.byS[2].isZero());
    CHECK(res.byS[3].isZero());
    CHECK(edgeUncertain(res, 5, 0));
    CHECK(edgeUncertain(res, 0, 10));
    CHECK_FALSE(edgeUncertain(res, 2, 4));
}

TEST_CASE("nonzero action runs the twisted periodic complex") {
    GradedModule base = freeModule(ringFlTau(3), {{0, 0}, {5, 2}});
    HomogeneousMap q = makeMap(base, base, qnActionDegree(3, 1), {{0, 1, Scalar{1, 0, 0}}});
    ExtResult res = extOverLambdaQn({1, base, q}, {3, 20, 10});
    REQUIRE_FALSE(res.notes.empty());
    CHECK(sameModule(res.byS[0], freeModule(ringFlTau(3), {{0, 0}})));
    for (int s = 1; s <= 3; ++s) CHECK(res.byS[static_cast<size_t>(s)].isZero());
}

TEST_CASE("module validation for the exterior algebra") {
    GradedModule overFl = freeModule(ringFl(3), {{0, 0}});
    CHECK_THROWS_AS(validateQnModule(trivialQnModule(1, overFl)), EngineError);

    GradedModule torsion{ringFlTau(3), {{{0, 0}, 2}}};
    try {
        validateQnModule(trivialQnModule(1, torsion));
        CHECK(false);
    } catch (const EngineError& e) {
        CHECK(e.code == "hypothesis-violation");
    }

    GradedModule chain = freeModule(ringFlTau(3), {{0, 0}, {5, 2}, {10, 4}});
    HomogeneousMap notSquareZero = makeMap(chain, chain, qnActionDegree(3, 1),
                                           {{0, 1, Scalar{1, 0, 0}}, {1, 2, Scalar{1, 0, 0}}});
    CHECK_THROWS_AS(validateQnModule({1, chain, notSquareZero}), EngineError);
}

TEST_CASE("cobar complex over the exterior dual") {
    CobarSpec spec{SteenrodPresentation{3}, DualKind::LambdaQnDual, 1};
    Comodule point = trivialComodule(spec, freeModule(ringFlTau(3), {{0, 0}}));
    CobarComplex cc = cobarComplex(point, {3, 14, 10});

    REQUIRE(cc.modules.size() == 5);
    REQUIRE(cc.modules[1].rank() == 1);
    CHECK(cc.modules[1].gens[0].deg == Bidegree{5, 2});
    for (const auto& d : cc.differentials) CHECK(d.isZero());

    ExtResult res = cotor(point, {3, 14, 10});
    for (int s = 0; s <= 3; ++s) {
        CHECK(sameModule(res.byS[static_cast<size_t>(s)],
                         freeModule(ringFlTau(3), {{4 * s, 2 * s}})));
    }
}

TEST_CASE("cotor of a window that misses every generator is empty") {
    CobarSpec spec{SteenrodPresentation{3}, DualKind::LambdaQnDual, 1};
    Comodule far = trivialComodule(spec, freeModule(ringFlTau(3), {{50, 0}}));
    ExtResult res = cotor(far, {2, 10, 10});
    for (const auto& m : res.byS) CHECK(m.isZero());
}

TEST_CASE("coaction validation") {
    CobarSpec spec{SteenrodPresentation{3}, DualKind::LambdaQnDual, 1};
    GradedModule base = freeModule(ringFlTau(3), {{0, 0}, {5, 2}});

    Comodule good = trivialComodule(spec, base);
    good.coaction[1].push_back({tauiMonomial(1), 0, Scalar{1, 0, 0}});
    CHECK_NOTHROW(validateComodule(good));

    Comodule badCounit = trivialComodule(spec, base);
    badCounit.coaction[0][0].x.c = 2;
    CHECK_THROWS_AS(validateComodule(badCounit), EngineError);

    Comodule badDegree = trivialComodule(spec, base);
    badDegree.coaction[1].push_back({tauiMonomial(1), 1, Scalar{1, 0, 0}});
    CHECK_THROWS_AS(validateComodule(badDegree), EngineError);

    Comodule outside = trivialComodule(spec, base);
    outside.coaction[1].push_back({tauiMonomial(0), 0, Scalar{1, 4, 0}});
    CHECK_THROWS_AS(validateComodule(outside), EngineError);

    GradedModule chain = freeModule(ringFlTau(3), {{0, 0}, {5, 2}, {10, 4}});
    Comodule notCoassoc = trivialComodule(spec, chain);
    notCoassoc.coaction[2].push_back({tauiMonomial(1), 1, Scalar{1, 0, 0}});
    notCoassoc.coaction[1].push_back({tauiMonomial(1), 0, Scalar{1, 0, 0}});
    CHECK_THROWS_AS(validateComodule(notCoassoc), EngineError);
}

TEST_CASE("resolution and cobar agree on random trivial comodules") {
    std::mt19937_64 rng(4001);
    int runs = 0;
    for (int trial = 0; trial < 22; ++trial) {
        int l = (trial % 3 == 2) ? 5 : 3;
        int n = (trial % 4 == 3 && l == 3) ? 2 : 1;
        GradedModule base = randomConnectiveFree(rng, l, 4, 10);
        ExtWindow w{3, 24, 12};

        ExtResult viaResolution = extOverLambdaQn(trivialQnModule(n, base), w);
        CobarSpec spec{SteenrodPresentation{l}, DualKind::LambdaQnDual, n};
        ExtResult viaCobar = cotor(trivialComodule(spec, base), w);

        REQUIRE(viaResolution.byS.size() == viaCobar.byS.size());
        for (size_t s = 0; s < viaResolution.byS.size(); ++s) {
            CHECK(sameModule(viaResolution.byS[s], viaCobar.byS[s]));
            for (const auto& g : viaCobar.byS[s].gens) CHECK(g.isFree());
        }
        CHECK(extToTsv(viaResolution) == extToTsv(viaCobar));

        // Base change to the topological ground field: generator counts per
        // (s, t) match the input rank at the unshifted degree.
        long long pw = 1;
        for (int i = 0; i < n; ++i) pw *= l;
        long long vp = 2 * (pw - 1);
        for (size_t s = 0; s < viaCobar.byS.size(); ++s) {
            std::map<long long, long long> perT;
            for (const auto& g : viaCobar.byS[s].gens) perT[g.deg.p] += 1;
            for (const auto& [t, count] : perT) {
                long long baseCount = 0;
                for (const auto& g : base.gens) {
                    if (g.deg.p == t - static_cast<long long>(s) * vp) ++baseCount;
                }
                CHECK(count == baseCount);
            }
        }
        ++runs;
    }
    CHECK(runs >= 20);
}

TEST_CASE("twisted comodule matches the twisted resolution") {
    GradedModule base = freeModule(ringFlTau(3), {{0, 0}, {5, 2}});
    HomogeneousMap q = makeMap(base, base, qnActionDegree(3, 1), {{0, 1, Scalar{1, 0, 0}}});
    QnModule m{1, base, q};

    ExtWindow w{3, 16, 10};
    ExtResult viaResolution = extOverLambdaQn(m, w);
    ExtResult viaCobar = cotor(comoduleFromQnModule(3, m), w);
    for (size_t s = 0; s < viaResolution.byS.size(); ++s) {
        CHECK(sameModule(viaResolution.byS[s], viaCobar.byS[s]));
    }
}

TEST_CASE("cobar over the full dual reproduces the first stems") {
    CobarSpec spec{SteenrodPresentation{3}, DualKind::FullDual, 1};
    Comodule point = trivialComodule(spec, freeModule(ringFlTau(3), {{0, 0}}));
    ExtResult res = cotor(point, {2, 8, 8});

    CHECK(sameModule(res.byS[0], freeModule(ringFlTau(3), {{0, 0}})));
    CHECK(sameModule(res.byS[1], freeModule(ringFlTau(3), {{0, 0}, {3, 2}})));
    CHECK(extRank(res, 2, 0, 0) == 1);
    CHECK(extRank(res, 2, 3, 2) == 0);
    CHECK(extRank(res, 2, 6, 4) == 0);
    for (const auto& m : res.byS) {
        for (const auto& g : m.gens) CHECK(g.isFree());
    }
}

TEST_CASE("certified restriction window") {
    SteenrodPresentation pres{3};
    VanishingLine n2 = approximationWindow(pres, rat(1, 4), rat(0), 2);
    CHECK(n2.slope == Rational{1, 4});
    CHECK(n2.intercept == Rational{-31, 4});

    VanishingLine n1 = approximationWindow(pres, rat(1, 4), rat(0), 1);
    VanishingLine n3 = approximationWindow(pres, rat(1, 4), rat(0), 3);
    CHECK(n1.intercept == Rational{-7, 4});
    CHECK(n3.intercept == Rational{-103, 4});
    CHECK(ratLess(n2.intercept, n1.intercept));
    CHECK(ratLess(n3.intercept, n2.intercept));

    for (int s = 0; s <= 5; ++s) {
        for (long long stem = 0; stem <= 40; ++stem) {
            CHECK(strictlyAboveLine(n3, s, stem));
        }
    }
    CHECK_THROWS_AS(approximationWindow(pres, rat(1, 4), rat(0), 0), EngineError);
}

TEST_CASE("vanishing line violations are detected") {
    ExtResult res = extOverLambdaQn(trivialQnModule(1, freeModule(ringFlTau(3), {{0, 0}})),
                                    {5, 40, 20});
    CHECK(resultRespectsLine(res, VanishingLine{rat(1, 4), rat(0)}));
    CHECK_FALSE(resultRespectsLine(res, VanishingLine{rat(1, 4), rat(-1)}));
}

TEST_CASE("tsv export lists window slices with torsion profiles") {
    ExtResult res = extOverLambdaQn(trivialQnModule(1, freeModule(ringFlTau(3), {{0, 0}})),
                                    {1, 4, 2});
    CHECK(extToTsv(res) ==
          "0\t0\t-2\t1\t-\n"
          "0\t0\t-1\t1\t-\n"
          "0\t0\t0\t1\tfree\n"
          "1\t4\t-2\t1\t-\n"
          "1\t4\t-1\t1\t-\n"
          "1\t4\t0\t1\t-\n"
          "1\t4\t1\t1\t-\n"
          "1\t4\t2\t1\tfree\n");
}
