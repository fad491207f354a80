#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "motx/cache.hpp"
#include "motx/errors.hpp"
#include "motx/ext.hpp"
#include "motx/serialize.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace motx;
namespace fs = std::filesystem;

namespace {

const fs::path& workRoot() {
    static fs::path root = [] {
        fs::path p = fs::temp_directory_path() /
                     ("motx-cli-test-" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeText(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

struct RunResult {
    int exit = -1;
    std::string out;
    std::string err;
};

// Runs the installed binary through the shell; env is a prefix like "K=v ".
RunResult run(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    fs::path o = workRoot() / ("stdout." + std::to_string(counter));
    fs::path e = workRoot() / ("stderr." + std::to_string(counter));
    ++counter;
    std::string cmd = env + std::string(MOTX_BIN) + " " + args + " > " + o.string() +
                      " 2> " + e.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string pathArg(const char* name) { return (workRoot() / name).string(); }

json ringJson(int l, const std::string& kind, int n = 0) {
    json j{{"l", l}, {"kind", kind}};
    if (kind == "FlTauVn") j["n"] = n;
    return j;
}

}  // namespace

TEST_CASE("ext writes the four products with the v tower inside") {
    std::string out = pathArg("ext-point");
    RunResult r = run("ext --algebra lambdaQn --module builtin:point --l 3 --n 1"
                      " --window s4,t20 --no-cache --out " + out);
    CHECK(r.exit == 0);
    std::string tsv = slurp(out + "/ext.tsv");
    CHECK(contains(tsv, "0\t0\t0\t1\tfree"));
    CHECK(contains(tsv, "1\t4\t2\t1\tfree"));
    CHECK(contains(tsv, "4\t16\t8\t1\tfree"));
    CHECK_FALSE(contains(tsv, "\n5\t"));

    json meta = parseJsonText(slurp(out + "/meta.json"));
    CHECK(meta.at("algebra") == "lambdaQn");
    CHECK(meta.at("l") == 3);
    std::string hash = meta.at("input-hash").get<std::string>();
    CHECK(hash.size() == 16);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);

    json ext = parseJsonText(slurp(out + "/ext.json"));
    CHECK(ext.at("byS").size() == 5);
    CHECK(contains(slurp(out + "/chart.svg"), "<svg"));
}

TEST_CASE("the two resolution routes print identical tables") {
    std::string a = pathArg("route-a");
    std::string b = pathArg("route-b");
    std::string shared = " --module builtin:moore --l 3 --n 1 --window s3,t12 --no-cache";
    CHECK(run("ext --algebra lambdaQn" + shared + " --out " + a).exit == 0);
    CHECK(run("ext --algebra cobar" + shared + " --out " + b).exit == 0);
    std::string tsvA = slurp(a + "/ext.tsv");
    CHECK_FALSE(tsvA.empty());
    CHECK(tsvA == slurp(b + "/ext.tsv"));
}

TEST_CASE("a window holding no classes yields empty files and success") {
    fs::path doc = workRoot() / "offset-module.json";
    json j = moduleToJson(GradedModule{ringFlTau(3), {Generator{{1, 0}, 0}}});
    writeText(doc, j.dump());
    std::string out = pathArg("ext-empty");
    RunResult r = run("ext --algebra lambdaQn --module " + doc.string() +
                      " --l 3 --n 1 --window s4,t0 --no-cache --out " + out);
    CHECK(r.exit == 0);
    CHECK(slurp(out + "/ext.tsv").empty());
    CHECK(parseJsonText(slurp(out + "/ext.json")).at("byS").size() == 5);
}

TEST_CASE("a warm cache reproduces the cold run byte for byte") {
    std::string cache = pathArg("cache");
    std::string a = pathArg("cold");
    std::string b = pathArg("warm");
    std::string shared = "ext --algebra cobar --module builtin:moore --l 3 --n 1"
                         " --window s3,t12 --cache-dir " + cache;
    CHECK(run(shared + " --out " + a).exit == 0);
    CHECK(fs::exists(cache));
    CHECK(run(shared + " --out " + b).exit == 0);
    for (const char* name : {"ext.tsv", "ext.json", "chart.svg", "meta.json"}) {
        CHECK(slurp(a + "/" + name) == slurp(b + "/" + name));
    }
}

TEST_CASE("cone of the torsion self map prints its normal form") {
    std::string out = pathArg("cone-cv");
    RunResult r = run("cone --map builtin:cv --l 3 --out " + out);
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "(0,0)/t^2 + (1,0)/t^2"));
    CHECK(contains(r.out, "nonzero after tau-inversion: false"));
    json payload = parseJsonText(slurp(out + "/cone.json"));
    CHECK(payload.at("ambiguous") == false);
    CHECK(payload.at("module").at("generators").size() == 2);
}

TEST_CASE("an ambiguous cone lists every candidate and exits 3") {
    json src = json{{"ring", ringJson(3, "FlTau")},
                    {"generators", json::array({json{{"p", 0}, {"q", 1}, {"torsion", 2}}})}};
    json tgt = json{{"ring", ringJson(3, "FlTau")},
                    {"generators", json::array({json{{"p", 1}, {"q", -1}, {"torsion", 3}}})}};
    json doc{{"src", src},
             {"tgt", tgt},
             {"map", json{{"deg", json::array({1, -4})},
                          {"entries", json::array({json::array({0, 0, 1, 2, 0})})}}}};
    fs::path file = workRoot() / "glued-map.json";
    writeText(file, doc.dump());
    RunResult r = run("cone --map " + file.string() + " --l 3");
    CHECK(r.exit == 3);
    CHECK(contains(r.out, "(1,-1)/t^2 + (1,0)/t^1"));
    CHECK(contains(r.out, "candidate: (1,0)/t^1 + (1,-1)/t^2"));
    CHECK(contains(r.out, "candidate: (1,0)/t^3"));
    CHECK(contains(r.out, "extension not forced"));
}

TEST_CASE("classify reports the isomorphism failure of the torsion map") {
    RunResult r = run("classify --spectrum builtin:moore --map builtin:cv --n 1");
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "self map of degree (4,0)"));
    CHECK(contains(r.out, "fails isomorphism"));
    CHECK(contains(r.out, "cokernel (0,0)/t^2 + (1,0)/t^2"));
}

TEST_CASE("power on a non isomorphism is a hypothesis violation") {
    RunResult r = run("power --map builtin:cv --l 3");
    CHECK(r.exit == 2);
    CHECK(contains(r.err, "\"error\":\"hypothesis-violation\""));
    CHECK(r.err.find('\n') == r.err.size() - 1);
}

TEST_CASE("power finds the cube of a perturbed periodicity map") {
    json mod = json{{"ring", ringJson(3, "FlTauVn", 1)},
                    {"generators", json::array({json{{"p", 0}, {"q", 0}, {"torsion", 0}},
                                                json{{"p", 4}, {"q", 0}, {"torsion", 0}}})}};
    json doc{{"src", mod},
             {"tgt", mod},
             {"map", json{{"deg", json::array({4, 2})},
                          {"entries", json::array({json::array({0, 0, 1, 0, 1}),
                                                   json::array({1, 1, 1, 0, 1}),
                                                   json::array({0, 1, 1, 2, 2})})}}}};
    fs::path file = workRoot() / "perturbed-map.json";
    writeText(file, doc.dump());
    RunResult r = run("power --map " + file.string() + " --l 3 --n 1");
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "f^3 = v^3"));
}

TEST_CASE("kunneth splits a free smash product") {
    RunResult r = run("kunneth --left builtin:cone-eta --right builtin:moore --l 3 --n 1");
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "(0,0) + (1,0) + (2,1) + (3,1)"));
}

TEST_CASE("realize counts the surviving free part") {
    RunResult r = run("realize --module builtin:cone-cv --l 3 --n 1");
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "free rank after tau inversion: 0"));
    CHECK(contains(r.out, "kernel of the comparison: (0,0)/t^2 + (1,0)/t^2"));
}

TEST_CASE("a cell program with an unresolved extension exits 3") {
    json ring = ringJson(3, "FlTau");
    json coneOne{{"op", "cone"},
                 {"src", json{{"ring", ring},
                              {"generators",
                               json::array({json{{"p", 1}, {"q", 2}, {"torsion", 0}}})}}},
                 {"map", json{{"deg", json::array({0, -6})},
                              {"entries", json::array({json::array({0, 0, 1, 3, 0})})}}}};
    json coneTwo{{"op", "cone"},
                 {"src", json{{"ring", ring},
                              {"generators",
                               json::array({json{{"p", 0}, {"q", 1}, {"torsion", 2}}})}}},
                 {"map", json{{"deg", json::array({1, -4})},
                              {"entries", json::array({json::array({0, 0, 1, 2, 0})})}}}};
    json program{{"ring", ring},
                 {"start", json::array({json::array({1, -1})})},
                 {"steps", json::array({coneOne, coneTwo})}};
    fs::path file = workRoot() / "glued-program.json";
    writeText(file, program.dump());

    RunResult r = run("realize --module " + file.string() + " --l 3");
    CHECK(r.exit == 3);
    CHECK(contains(r.out, "input carries an unresolved extension"));

    fs::path unit = workRoot() / "tau-unit.json";
    writeText(unit, moduleToJson(freeModule(ringFlTau(3), {{0, 0}})).dump());
    RunResult k = run("kunneth --left " + unit.string() + " --right " + file.string() + " --l 3");
    CHECK(k.exit == 3);
}

TEST_CASE("settings fall back from flag to environment to config") {
    fs::path cfg = workRoot() / "motx.cfg";
    writeText(cfg, "# pick the larger prime\nl = 5\n");
    RunResult viaConfig = run("cone --map builtin:cv --config " + cfg.string());
    CHECK(contains(viaConfig.out, "(0,0)/t^4"));

    RunResult viaConfigEnv = run("cone --map builtin:cv", "MOTX_CONFIG=" + cfg.string() + " ");
    CHECK(contains(viaConfigEnv.out, "(0,0)/t^4"));

    RunResult envWins = run("cone --map builtin:cv --config " + cfg.string(), "MOTX_L=3 ");
    CHECK(contains(envWins.out, "(0,0)/t^2"));

    RunResult flagWins = run("cone --map builtin:cv --config " + cfg.string() + " --l 3",
                             "MOTX_L=5 ");
    CHECK(contains(flagWins.out, "(0,0)/t^2"));
}

TEST_CASE("paper replays a single case against its golden file") {
    RunResult r = run("paper --case cv-cone --golden-dir " + std::string(MOTX_GOLDEN_DIR));
    CHECK(r.exit == 0);
    CHECK(contains(r.out, "cone of the tau^2 v self map"));
    CHECK(contains(r.out, "PASS cv-cone"));
    CHECK(contains(r.out, "1/1 PASS"));

    RunResult unknown = run("paper --case bogus");
    CHECK(unknown.exit == 2);
    CHECK(contains(unknown.err, "unknown case"));
}

TEST_CASE("bad invocations produce one line machine readable diagnostics") {
    RunResult missing = run("ext --algebra lambdaQn");
    CHECK(missing.exit == 2);
    CHECK(contains(missing.err, "\"error\":\"malformed-input\""));
    CHECK(missing.err.find('\n') == missing.err.size() - 1);

    RunResult badSub = run("frobnicate");
    CHECK(badSub.exit == 2);

    RunResult badPrime = run("cone --map builtin:cv --l 4");
    CHECK(badPrime.exit == 2);
    CHECK(contains(badPrime.err, "odd prime"));

    RunResult badWindow = run("ext --algebra lambdaQn --module builtin:point"
                              " --window t9 --no-cache --out " + pathArg("unused"));
    CHECK(badWindow.exit == 2);
    CHECK(contains(badWindow.err, "window"));

    RunResult noFile = run("cone --map no-such-file.json");
    CHECK(noFile.exit == 2);

    RunResult help = run("--help");
    CHECK(help.exit == 0);
    CHECK(contains(help.out, "paper"));
}

TEST_CASE("results survive the cache round trip unchanged") {
    QnModule point = trivialQnModule(1, freeModule(ringFlTau(3), {{0, 0}}));
    ExtWindow w{2, 8, 4};
    ExtResult ext = extOverLambdaQn(point, w);
    ExtResult back = extResultFromJson(extResultToJson(ext));
    CHECK(back.ring == ext.ring);
    CHECK(extToTsv(back) == extToTsv(ext));

    std::string dir = pathArg("unit-cache");
    json input = moduleToJson(point.base);
    std::string key = extCacheKey(3, 1, "lambdaQn", w, input);
    CHECK(key == extCacheKey(3, 1, "lambdaQn", w, input));
    CHECK(key != extCacheKey(5, 1, "lambdaQn", w, input));
    CHECK(key != extCacheKey(3, 1, "cobar", w, input));
    CHECK(key != extCacheKey(3, 1, "lambdaQn", ExtWindow{2, 8, 5}, input));

    CHECK_FALSE(cacheLoad(dir, key).has_value());
    cacheStore(dir, key, extResultToJson(ext));
    auto hit = cacheLoad(dir, key);
    REQUIRE(hit.has_value());
    CHECK(extToTsv(extResultFromJson(*hit)) == extToTsv(ext));

    writeText(fs::path(dir) / (key + ".json"), "not json at all");
    CHECK_FALSE(cacheLoad(dir, key).has_value());
}
