#pragma once

#include "motx/ext.hpp"
#include "motx/serialize.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace motx {

std::string fnv1a64Hex(std::string_view bytes);

json extResultToJson(const ExtResult& r);
ExtResult extResultFromJson(const json& j);

// Key of one Ext computation: prime, height, resolution route, window, and
// the canonical dump of the input document (module plus action map).
std::string extCacheKey(int l, int n, const std::string& algebra, const ExtWindow& w,
                        const json& input);

// Content-addressed store of JSON values under dir/<key>.json. Loads treat a
// missing or unreadable entry as a miss; stores go through a temp file and a
// rename so a concurrent reader never sees a partial write.
std::optional<json> cacheLoad(const std::string& dir, const std::string& key);
void cacheStore(const std::string& dir, const std::string& key, const json& value);

}  // namespace motx
