#include "motx/serialize.hpp"

#include "motx/errors.hpp"

#include <fstream>
#include <sstream>

namespace motx {

namespace {

std::string kindName(RingKind k) {
    switch (k) {
        case RingKind::Fl: return "Fl";
        case RingKind::FlTau: return "FlTau";
        case RingKind::FlTauVn: return "FlTauVn";
    }
    throw internalError("unknown ring kind");
}

RingKind kindFromName(const std::string& s) {
    if (s == "Fl") return RingKind::Fl;
    if (s == "FlTau") return RingKind::FlTau;
    if (s == "FlTauVn") return RingKind::FlTauVn;
    throw malformedInput("unknown ring kind '" + s + "'");
}

}  // namespace

json ringToJson(const CoefficientRing& r) {
    json j;
    j["l"] = r.l;
    j["kind"] = kindName(r.kind);
    if (r.kind == RingKind::FlTauVn) j["n"] = r.n;
    if (r.tauInverted) j["tauInverted"] = true;
    return j;
}

CoefficientRing ringFromJson(const json& j) {
    try {
        CoefficientRing r;
        r.l = j.at("l").get<int>();
        r.kind = kindFromName(j.at("kind").get<std::string>());
        r.n = j.value("n", 0);
        r.tauInverted = j.value("tauInverted", false);
        r.validate();
        return r;
    } catch (const json::exception& e) {
        throw malformedInput(std::string("bad ring description: ") + e.what());
    }
}

json moduleToJson(const GradedModule& m) {
    json j;
    j["ring"] = ringToJson(m.ring);
    json gens = json::array();
    for (const auto& g : m.gens) {
        gens.push_back(json{{"p", g.deg.p}, {"q", g.deg.q}, {"torsion", g.torsion}});
    }
    j["generators"] = std::move(gens);
    return j;
}

GradedModule moduleFromJson(const json& j) {
    try {
        GradedModule m;
        m.ring = ringFromJson(j.at("ring"));
        for (const auto& g : j.at("generators")) {
            m.gens.push_back(Generator{
                Bidegree{g.at("p").get<long long>(), g.at("q").get<long long>()},
                g.value("torsion", 0LL)});
        }
        m.validate();
        return m;
    } catch (const json::exception& e) {
        throw malformedInput(std::string("bad module description: ") + e.what());
    }
}

json mapToJson(const HomogeneousMap& f) {
    json j;
    j["deg"] = json::array({f.deg.p, f.deg.q});
    json entries = json::array();
    for (const auto& e : f.entries) {
        entries.push_back(json::array({e.row, e.col, e.x.c, e.x.a, e.x.b}));
    }
    j["entries"] = std::move(entries);
    return j;
}

HomogeneousMap mapFromJson(const json& j, const GradedModule& src, const GradedModule& tgt) {
    try {
        const auto& d = j.at("deg");
        if (!d.is_array() || d.size() != 2) throw malformedInput("map deg must be [p, q]");
        Bidegree deg{d.at(0).get<long long>(), d.at(1).get<long long>()};
        std::vector<MapEntry> entries;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || e.size() != 5) {
                throw malformedInput("map entry must be [row, col, c, a, b]");
            }
            entries.push_back(MapEntry{
                e.at(0).get<int>(), e.at(1).get<int>(),
                Scalar{normMod(e.at(2).get<long long>(), src.ring.l),
                       e.at(3).get<long long>(), e.at(4).get<long long>()}});
        }
        return makeMap(src, tgt, deg, std::move(entries));
    } catch (const json::exception& e) {
        throw malformedInput(std::string("bad map description: ") + e.what());
    }
}

json documentToJson(const ModuleDocument& d) {
    json j = moduleToJson(d.module);
    json maps = json::array();
    for (const auto& [name, f] : d.maps) {
        json m = mapToJson(f);
        m["name"] = name;
        maps.push_back(std::move(m));
    }
    if (!maps.empty()) j["maps"] = std::move(maps);
    return j;
}

ModuleDocument documentFromJson(const json& j) {
    ModuleDocument d;
    d.module = moduleFromJson(j);
    try {
        if (j.contains("maps")) {
            int index = 0;
            for (const auto& m : j.at("maps")) {
                std::string name = m.value("name", "m" + std::to_string(index));
                d.maps.emplace_back(std::move(name), mapFromJson(m, d.module, d.module));
                ++index;
            }
        }
    } catch (const json::exception& e) {
        throw malformedInput(std::string("bad document: ") + e.what());
    }
    return d;
}

ModuleDocument documentFromString(const std::string& text) {
    return documentFromJson(parseJsonText(text));
}

ModuleDocument documentFromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw malformedInput("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return documentFromString(buf.str());
}

std::string canonicalDump(const json& j) { return j.dump(); }

json parseJsonText(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw malformedInput("input is not valid JSON");
    return j;
}

}  // namespace motx
