#include "motx/cache.hpp"

#include "motx/errors.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace motx {

std::string fnv1a64Hex(std::string_view bytes) {
    unsigned long long h = 14695981039346656037ULL;
    for (char ch : bytes) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

json extResultToJson(const ExtResult& r) {
    json j;
    j["ring"] = ringToJson(r.ring);
    j["window"] = json::array({r.window.sMax, r.window.tMax, r.window.uMax});
    json by = json::array();
    for (const auto& m : r.byS) by.push_back(moduleToJson(m));
    j["byS"] = std::move(by);
    j["notes"] = r.notes;
    return j;
}

ExtResult extResultFromJson(const json& j) {
    try {
        ExtResult r;
        r.ring = ringFromJson(j.at("ring"));
        const json& w = j.at("window");
        r.window = ExtWindow{w.at(0).get<int>(), w.at(1).get<long long>(),
                             w.at(2).get<long long>()};
        for (const auto& m : j.at("byS")) r.byS.push_back(moduleFromJson(m));
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw malformedInput(std::string("bad cached result: ") + e.what());
    }
}

std::string extCacheKey(int l, int n, const std::string& algebra, const ExtWindow& w,
                        const json& input) {
    json key;
    key["l"] = l;
    key["n"] = n;
    key["algebra"] = algebra;
    key["window"] = json::array({w.sMax, w.tMax, w.uMax});
    key["input"] = input;
    return fnv1a64Hex(canonicalDump(key));
}

std::optional<json> cacheLoad(const std::string& dir, const std::string& key) {
    std::filesystem::path path = std::filesystem::path(dir) / (key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    json j = json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

void cacheStore(const std::string& dir, const std::string& key, const json& value) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::filesystem::path final = std::filesystem::path(dir) / (key + ".json");
    std::filesystem::path tmp = final;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw internalError("cannot write cache entry '" + tmp.string() + "'");
        out << value.dump() << "\n";
    }
    std::filesystem::rename(tmp, final, ec);
    if (ec) throw internalError("cannot finalize cache entry '" + final.string() + "'");
}

}  // namespace motx
