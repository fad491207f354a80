#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "motx/errors.hpp"
#include "motx/serialize.hpp"

#include "support.hpp"

using namespace motx;
using namespace motx::testsupport;

TEST_CASE("module documents round trip byte for byte") {
    std::mt19937_64 rng(4001);
    for (int trial = 0; trial < 200; ++trial) {
        CoefficientRing r = randomRing(rng);
        ModuleDocument d;
        d.module = randomModule(rng, r, 5, 6, 4);
        if (!d.module.gens.empty()) {
            d.maps.emplace_back("f", randomMap(rng, d.module, d.module,
                                               randomMapDegree(rng, r), 1));
        }
        const std::string text = canonicalDump(documentToJson(d));
        ModuleDocument back = documentFromString(text);
        CHECK(back.module.ring == d.module.ring);
        CHECK(back.module.gens == d.module.gens);
        REQUIRE(back.maps.size() == d.maps.size());
        for (size_t i = 0; i < d.maps.size(); ++i) {
            CHECK(back.maps[i].first == d.maps[i].first);
            CHECK(mapsEqual(back.maps[i].second, d.maps[i].second));
        }
        CHECK(canonicalDump(documentToJson(back)) == text);
    }
}

TEST_CASE("parsing rejects malformed input with the input error code") {
    auto code = [](const std::string& text) {
        try {
            documentFromString(text);
            return std::string("ok");
        } catch (const EngineError& e) {
            return e.code;
        }
    };
    CHECK(code("not json") == "malformed-input");
    CHECK(code("{}") == "malformed-input");
    CHECK(code(R"({"ring":{"l":4,"kind":"FlTau"},"generators":[]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlQ"},"generators":[]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTauVn"},"generators":[]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0}]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0,"q":0,"torsion":-1}]})") ==
          "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"Fl"},"generators":[{"p":0,"q":0,"torsion":2}]})") ==
          "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[],"maps":[{"deg":[0],"entries":[]}]})") ==
          "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0,"q":0,"torsion":0}],)"
               R"("maps":[{"deg":[0,0],"entries":[[0,0,1,1,0]]}]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0,"q":0,"torsion":0}],)"
               R"("maps":[{"deg":[0,0],"entries":[[0,1,1,0,0]]}]})") == "malformed-input");
    CHECK(code(R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0,"q":0,"torsion":0}],)"
               R"("maps":[{"deg":[0,0],"entries":[[0,0,1,0,0]]}]})") == "ok");
}

TEST_CASE("torsion zero marks a free generator") {
    ModuleDocument d = documentFromString(
        R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":1,"q":2},{"p":0,"q":0,"torsion":3}]})");
    CHECK(d.module.gens[0].isFree());
    CHECK(d.module.gens[1].torsion == 3);
}

TEST_CASE("map names default to their position") {
    ModuleDocument d = documentFromString(
        R"({"ring":{"l":3,"kind":"FlTau"},"generators":[{"p":0,"q":0}],)"
        R"("maps":[{"deg":[0,0],"entries":[]},{"name":"tau","deg":[0,-1],"entries":[[0,0,1,1,0]]}]})");
    REQUIRE(d.maps.size() == 2);
    CHECK(d.maps[0].first == "m0");
    CHECK(d.maps[1].first == "tau");
    CHECK(d.maps[1].second.at(0, 0) == makeScalar(d.module.ring, 1, 1, 0));
}
