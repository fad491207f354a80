#include <CLI11.hpp>

#include "motx/cache.hpp"
#include "motx/chart.hpp"
#include "motx/errors.hpp"
#include "motx/homology.hpp"
#include "motx/paper_cases.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using namespace motx;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw malformedInput("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void writeFile(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw internalError("cannot write output file '" + path.string() + "'");
    out << content;
}

// key=value lines with # comments, no sections
std::map<std::string, std::string> parseConfigFile(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(readFile(path));
    std::string line;
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t\r");
        size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw malformedInput("config line " + std::to_string(lineNo) +
                                 " is not key=value: '" + t + "'");
        }
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

// Option values bound as strings so the precedence between the command
// line, MOTX_* environment variables, and the config file stays explicit.
struct Common {
    std::string l, n, window, out, cacheDir, cap, config;
    bool noCache = false;
};

void addCommon(CLI::App* cmd, Common& c) {
    cmd->add_option("--l", c.l, "odd prime (default 3)");
    cmd->add_option("--n", c.n, "height of the periodicity generator (default 1)");
    cmd->add_option("--out", c.out, "output directory for file products");
    cmd->add_option("--cache-dir", c.cacheDir, "content-addressed cache directory");
    cmd->add_flag("--no-cache", c.noCache, "disable the result cache");
    cmd->add_option("--cap", c.cap, "exponent cap for iterated composition searches");
    cmd->add_option("--config", c.config, "config file with key=value lines");
}

struct Resolved {
    int l = 3;
    int n = 1;
    std::string window;
    std::string out;
    std::string cacheDir;
    long long cap = 0;
};

long long parseInt(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw malformedInput(what + " must be an integer, got '" + s + "'");
    }
}

std::string pick(const std::string& flag, const char* env,
                 const std::map<std::string, std::string>& cfg, const std::string& key,
                 const std::string& fallback) {
    if (!flag.empty()) return flag;
    if (const char* e = std::getenv(env); e && *e) return e;
    if (auto it = cfg.find(key); it != cfg.end()) return it->second;
    return fallback;
}

Resolved resolveCommon(const Common& c) {
    std::string configPath = c.config;
    if (configPath.empty()) {
        if (const char* e = std::getenv("MOTX_CONFIG"); e && *e) configPath = e;
    }
    std::map<std::string, std::string> cfg;
    if (!configPath.empty()) cfg = parseConfigFile(configPath);

    Resolved r;
    r.l = static_cast<int>(parseInt(pick(c.l, "MOTX_L", cfg, "l", "3"), "--l"));
    r.n = static_cast<int>(parseInt(pick(c.n, "MOTX_N", cfg, "n", "1"), "--n"));
    if (!isOddPrime(r.l)) throw malformedInput("--l must be an odd prime");
    if (r.n < 1) throw malformedInput("--n must be at least 1");
    r.window = pick(c.window, "MOTX_WINDOW", cfg, "window", "s4,t20");
    r.out = pick(c.out, "MOTX_OUT", cfg, "out", "motx-out");
    r.cacheDir = pick(c.cacheDir, "MOTX_CACHE_DIR", cfg, "cache-dir", ".motx-cache");
    if (c.noCache) r.cacheDir.clear();
    r.cap = parseInt(pick(c.cap, "MOTX_CAP", cfg, "cap", "0"), "--cap");
    return r;
}

// "s4,t20" or "s4,t20,u12"; the weight bound defaults to the stem bound
ExtWindow parseWindow(const std::string& text) {
    std::optional<long long> s, t, u;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.size() < 2) throw malformedInput("bad window component '" + token + "'");
        long long v = parseInt(token.substr(1), "window bound");
        switch (token[0]) {
            case 's': s = v; break;
            case 't': t = v; break;
            case 'u': u = v; break;
            default: throw malformedInput("bad window component '" + token + "'");
        }
    }
    if (!s || !t) throw malformedInput("window needs s and t bounds, like s4,t20");
    ExtWindow w{static_cast<int>(*s), *t, u.value_or(std::max<long long>(*t, 0))};
    w.validate();
    return w;
}

struct BuiltinRef {
    std::string name;
    std::optional<int> l, n;
};

std::optional<BuiltinRef> parseBuiltin(const std::string& spec) {
    if (spec.rfind("builtin:", 0) != 0) return std::nullopt;
    std::string rest = spec.substr(8);
    BuiltinRef ref;
    size_t open = rest.find('(');
    if (open == std::string::npos) {
        ref.name = rest;
        return ref;
    }
    if (rest.back() != ')') throw malformedInput("unbalanced builtin arguments in '" + spec + "'");
    ref.name = rest.substr(0, open);
    std::string args = rest.substr(open + 1, rest.size() - open - 2);
    std::vector<long long> vals;
    std::istringstream in(args);
    std::string token;
    while (std::getline(in, token, ',')) vals.push_back(parseInt(token, "builtin argument"));
    if (vals.empty() || vals.size() > 2) {
        throw malformedInput("builtin arguments must be (l) or (l,n)");
    }
    ref.l = static_cast<int>(vals[0]);
    if (vals.size() == 2) ref.n = static_cast<int>(vals[1]);
    return ref;
}

struct LoadedModule {
    GradedModule module;
    bool ambiguous = false;
    std::vector<std::string> notes;
    json input;
};

LoadedModule loadModule(const std::string& spec, int l, int n) {
    if (auto b = parseBuiltin(spec)) {
        LoadedModule out;
        out.module = builtinCell(b->name, b->l.value_or(l), b->n.value_or(n));
        out.input = moduleToJson(out.module);
        return out;
    }
    json j = parseJsonText(readFile(spec));
    if (j.is_object() && j.contains("steps")) {
        CellEvalResult r = evalCellDescription(j);
        return {r.module, r.ambiguous, r.notes, j};
    }
    return {documentFromJson(j).module, false, {}, j};
}

// A map given as builtin:NAME, as a {src,tgt,map} file, or as the name of a
// self map inside the --module/--spectrum document.
HomogeneousMap loadMap(const std::string& mapSpec, const std::string& moduleSpec, int l, int n) {
    if (auto b = parseBuiltin(mapSpec)) {
        return builtinMap(b->name, b->l.value_or(l), b->n.value_or(n));
    }
    if (std::filesystem::exists(mapSpec)) {
        json j = parseJsonText(readFile(mapSpec));
        if (!j.is_object() || !j.contains("src") || !j.contains("tgt") || !j.contains("map")) {
            throw malformedInput("a map file needs src, tgt and map fields");
        }
        GradedModule src = moduleFromJson(j.at("src"));
        GradedModule tgt = moduleFromJson(j.at("tgt"));
        return mapFromJson(j.at("map"), src, tgt);
    }
    if (!moduleSpec.empty() && !parseBuiltin(moduleSpec)) {
        ModuleDocument d = documentFromFile(moduleSpec);
        for (const auto& [name, f] : d.maps) {
            if (name == mapSpec) return f;
        }
        throw malformedInput("document has no map named '" + mapSpec + "'");
    }
    throw malformedInput("--map must be builtin:NAME, a map file, or a named map in a document");
}

bool sameGenerators(const GradedModule& a, const GradedModule& b) {
    return a.ring == b.ring && a.gens == b.gens;
}

int reportAmbiguousInput(const LoadedModule& m) {
    for (const std::string& note : m.notes) std::cout << "note: " << note << "\n";
    std::cout << "input carries an unresolved extension; results use the associated graded\n";
    return 3;
}

json moduleListJson(const std::vector<GradedModule>& ms) {
    json out = json::array();
    for (const auto& m : ms) out.push_back(moduleToJson(m));
    return out;
}

// ---- subcommand handlers ----

struct ExtArgs {
    Common common;
    std::string algebra, module;
};

int runExt(const ExtArgs& a) {
    Resolved r = resolveCommon(a.common);
    if (a.algebra != "lambdaQn" && a.algebra != "cobar") {
        throw malformedInput("--algebra must be lambdaQn or cobar");
    }
    GradedModule base;
    std::optional<HomogeneousMap> action;
    json input;
    if (auto b = parseBuiltin(a.module)) {
        if (b->l) r.l = *b->l;
        if (b->n) r.n = *b->n;
        std::vector<Bidegree> degs = (b->name == "point")
                                         ? std::vector<Bidegree>{{0, 0}}
                                         : builtinCellDegrees(b->name, r.l, r.n);
        base = freeModule(ringFlTau(r.l), degs);
        input = moduleToJson(base);
    } else {
        ModuleDocument d = documentFromFile(a.module);
        base = d.module;
        for (const auto& [name, f] : d.maps) {
            if (name == "action") action = f;
        }
        input = documentToJson(d);
    }
    QnModule qn = action ? QnModule{r.n, base, *action} : trivialQnModule(r.n, base);
    ExtWindow w = parseWindow(r.window);

    std::string key = extCacheKey(r.l, r.n, a.algebra, w, input);
    ExtResult result;
    bool haveResult = false;
    if (!r.cacheDir.empty()) {
        if (auto hit = cacheLoad(r.cacheDir, key)) {
            result = extResultFromJson(*hit);
            haveResult = true;
        }
    }
    if (!haveResult) {
        result = (a.algebra == "lambdaQn") ? extOverLambdaQn(qn, w)
                                           : cotor(comoduleFromQnModule(r.l, qn), w);
        if (!r.cacheDir.empty()) cacheStore(r.cacheDir, key, extResultToJson(result));
    }

    std::filesystem::create_directories(r.out);
    std::filesystem::path out(r.out);
    writeFile(out / "ext.tsv", extToTsv(result));
    writeFile(out / "ext.json", extResultToJson(result).dump(2) + "\n");
    writeFile(out / "chart.svg", chartToSvg(chartFromExt(result, r.n)));
    json meta;
    meta["command"] = "ext";
    meta["algebra"] = a.algebra;
    meta["l"] = r.l;
    meta["n"] = r.n;
    meta["window"] = json::array({w.sMax, w.tMax, w.uMax});
    meta["input-hash"] = key;
    writeFile(out / "meta.json", meta.dump(2) + "\n");
    std::cout << "wrote ext.tsv, ext.json, chart.svg, meta.json under " << r.out << "\n";
    return 0;
}

struct MapArgs {
    Common common;
    std::string map, module;
};

int runCone(const MapArgs& a) {
    Resolved r = resolveCommon(a.common);
    HomogeneousMap f = loadMap(a.map, a.module, r.l, r.n);
    ConeResult c = coneHomology(f);
    std::cout << toText(c.module) << "\n";
    for (const std::string& note : c.notes) std::cout << "note: " << note << "\n";
    std::cout << "nonzero after tau-inversion: "
              << (invertTau(c.module).isZero() ? "false" : "true") << "\n";
    for (const auto& cand : c.candidates) std::cout << "candidate: " << toText(cand) << "\n";
    if (!a.common.out.empty()) {
        std::filesystem::create_directories(r.out);
        json j;
        j["module"] = moduleToJson(c.module);
        j["ambiguous"] = c.ambiguous;
        j["candidates"] = moduleListJson(c.candidates);
        j["notes"] = c.notes;
        writeFile(std::filesystem::path(r.out) / "cone.json", j.dump(2) + "\n");
    }
    return c.ambiguous ? 3 : 0;
}

struct KunnethArgs {
    Common common;
    std::string left, right;
};

int runKunneth(const KunnethArgs& a) {
    Resolved r = resolveCommon(a.common);
    LoadedModule left = loadModule(a.left, r.l, r.n);
    LoadedModule right = loadModule(a.right, r.l, r.n);
    KunnethResult k = kunneth(left.module, right.module);
    std::cout << toText(k.module) << "\n";
    for (const std::string& note : k.notes) std::cout << "note: " << note << "\n";
    if (left.ambiguous) return reportAmbiguousInput(left);
    if (right.ambiguous) return reportAmbiguousInput(right);
    return 0;
}

struct ModuleArgs {
    Common common;
    std::string module;
};

int runRealize(const ModuleArgs& a) {
    Resolved r = resolveCommon(a.common);
    LoadedModule m = loadModule(a.module, r.l, r.n);
    RealizationImage image = realize(m.module);
    std::cout << "free rank after tau inversion: " << realizedDimension(image) << "\n";
    for (size_t i = 0; i < image.targetDegrees.size(); ++i) {
        std::cout << "generator: degree " << image.targetDegrees[i] << ", collapsed weight "
                  << image.collapseExponents[i] << "\n";
    }
    std::cout << "kernel of the comparison: " << toText(realizationKernel(m.module)) << "\n";
    if (m.ambiguous) return reportAmbiguousInput(m);
    return 0;
}

struct ClassifyArgs {
    Common common;
    std::string spectrum, map, height;
};

int runClassify(const ClassifyArgs& a) {
    Resolved r = resolveCommon(a.common);
    HomogeneousMap f = loadMap(a.map, a.spectrum, r.l, r.n);
    if (!a.spectrum.empty()) {
        LoadedModule spec = loadModule(a.spectrum, r.l, r.n);
        if (spec.ambiguous) return reportAmbiguousInput(spec);
        if (!sameGenerators(spec.module, f.src)) {
            throw malformedInput("--spectrum does not match the source of the map");
        }
    }
    int height = a.height.empty() ? f.ring().n
                                  : static_cast<int>(parseInt(a.height, "--height"));
    SelfMapReport rep = classifySelfMap({{height, f}}, r.n, r.cap);
    std::cout << toText(rep);
    return 0;
}

int runPower(const MapArgs& a) {
    Resolved r = resolveCommon(a.common);
    HomogeneousMap f = loadMap(a.map, a.module, r.l, r.n);
    PowerRelation pr = powerRelation(f, r.cap);
    std::cout << toText(pr) << "\n";
    return pr.found ? 0 : 3;
}

struct PaperArgs {
    Common common;
    std::string goldenDir, oneCase;
    bool all = false;
    bool writeGolden = false;
};

int runPaper(const PaperArgs& a) {
    std::string configPath = a.common.config;
    std::map<std::string, std::string> cfg;
    if (!configPath.empty()) cfg = parseConfigFile(configPath);
    std::string dir = pick(a.goldenDir, "MOTX_GOLDEN_DIR", cfg, "golden-dir", "share/golden");

    std::vector<std::string> names;
    if (a.all) {
        names = paperCaseNames();
    } else if (!a.oneCase.empty()) {
        names.push_back(a.oneCase);
    } else {
        throw malformedInput("paper needs --all or --case NAME");
    }

    if (a.writeGolden) {
        std::filesystem::create_directories(dir);
        for (const std::string& name : names) {
            writeFile(std::filesystem::path(dir) / (name + ".txt"), runPaperCase(name));
            std::cout << "wrote " << name << ".txt\n";
        }
        return 0;
    }

    int passed = 0;
    for (const std::string& name : names) {
        std::string body = runPaperCase(name);
        if (names.size() == 1) std::cout << body;
        std::filesystem::path golden = std::filesystem::path(dir) / (name + ".txt");
        std::ifstream in(golden);
        if (!in) {
            std::cout << "FAIL " << name << " (missing golden file " << golden.string() << ")\n";
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        if (buf.str() == body) {
            std::cout << "PASS " << name << "\n";
            ++passed;
        } else {
            std::cout << "FAIL " << name << " (output differs from " << golden.string() << ")\n";
        }
    }
    std::cout << passed << "/" << names.size() << " PASS\n";
    return passed == static_cast<int>(names.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Ext charts and Morava homology over the complex motivic coefficients"};
    app.require_subcommand(1);

    ExtArgs ext;
    CLI::App* extCmd = app.add_subcommand("ext", "Ext over the exterior subalgebra, two routes");
    addCommon(extCmd, ext.common);
    extCmd->add_option("--algebra", ext.algebra, "lambdaQn or cobar")->required();
    extCmd->add_option("--module", ext.module, "module document or builtin:NAME")->required();
    extCmd->add_option("--window", ext.common.window, "window bounds, like s4,t20 or s4,t20,u12");

    MapArgs cone;
    CLI::App* coneCmd = app.add_subcommand("cone", "homology of the cofiber of a map");
    addCommon(coneCmd, cone.common);
    coneCmd->add_option("--map", cone.map, "builtin:NAME, map file, or named map")->required();
    coneCmd->add_option("--module", cone.module, "document holding the named map");

    KunnethArgs kun;
    CLI::App* kunCmd = app.add_subcommand("kunneth", "tensor decomposition of a smash product");
    addCommon(kunCmd, kun.common);
    kunCmd->add_option("--left", kun.left, "free factor, module input")->required();
    kunCmd->add_option("--right", kun.right, "second factor, module input")->required();

    ModuleArgs real;
    CLI::App* realCmd = app.add_subcommand("realize", "Betti realization image and kernel");
    addCommon(realCmd, real.common);
    realCmd->add_option("--module", real.module, "module input")->required();

    ClassifyArgs cls;
    CLI::App* clsCmd = app.add_subcommand("classify", "self map verdicts across heights");
    addCommon(clsCmd, cls.common);
    clsCmd->add_option("--spectrum", cls.spectrum, "module input carrying the map");
    clsCmd->add_option("--map", cls.map, "builtin:NAME, map file, or named map")->required();
    clsCmd->add_option("--height", cls.height, "height of the supplied map (default: its ring)");

    MapArgs pow;
    CLI::App* powCmd = app.add_subcommand("power", "smallest power landing on a v multiple");
    addCommon(powCmd, pow.common);
    powCmd->add_option("--map", pow.map, "builtin:NAME, map file, or named map")->required();
    powCmd->add_option("--module", pow.module, "document holding the named map");

    PaperArgs paper;
    CLI::App* paperCmd = app.add_subcommand("paper", "recompute the worked examples and diff");
    addCommon(paperCmd, paper.common);
    paperCmd->add_flag("--all", paper.all, "run every case");
    paperCmd->add_option("--case", paper.oneCase, "run one case by name");
    paperCmd->add_option("--golden-dir", paper.goldenDir, "directory of expected outputs");
    paperCmd->add_flag("--write-golden", paper.writeGolden, "write expected outputs and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << json{{"error", "malformed-input"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (extCmd->parsed()) return runExt(ext);
        if (coneCmd->parsed()) return runCone(cone);
        if (kunCmd->parsed()) return runKunneth(kun);
        if (realCmd->parsed()) return runRealize(real);
        if (clsCmd->parsed()) return runClassify(cls);
        if (powCmd->parsed()) return runPower(pow);
        if (paperCmd->parsed()) return runPaper(paper);
        throw internalError("no subcommand dispatched");
    } catch (const EngineError& e) {
        std::cerr << json{{"error", e.code}, {"message", e.what()}}.dump() << "\n";
        return e.code == "internal" ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
