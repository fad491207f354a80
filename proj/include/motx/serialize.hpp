#pragma once

#include "motx/map.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace motx {

using nlohmann::json;

// A module together with named self maps, the unit of CLI input. Map entry
// rows index target generators, columns source generators, and torsion 0
// marks a free generator.
struct ModuleDocument {
    GradedModule module;
    std::vector<std::pair<std::string, HomogeneousMap>> maps;
};

json ringToJson(const CoefficientRing& r);
CoefficientRing ringFromJson(const json& j);

json moduleToJson(const GradedModule& m);
GradedModule moduleFromJson(const json& j);

json mapToJson(const HomogeneousMap& f);
HomogeneousMap mapFromJson(const json& j, const GradedModule& src, const GradedModule& tgt);

json documentToJson(const ModuleDocument& d);
ModuleDocument documentFromJson(const json& j);
ModuleDocument documentFromString(const std::string& text);
ModuleDocument documentFromFile(const std::string& path);

// Compact single-line dump with sorted keys, the canonical byte form used
// for cache keys and golden comparisons.
std::string canonicalDump(const json& j);

json parseJsonText(const std::string& text);

}  // namespace motx
