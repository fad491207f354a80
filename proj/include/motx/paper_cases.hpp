#pragma once

#include <string>
#include <vector>

namespace motx {

// Named end-to-end scenarios recomputed from scratch on every run. Each one
// returns a deterministic text report that is diffed against the checked-in
// expected output by the batch front end.
std::vector<std::string> paperCaseNames();
std::string runPaperCase(const std::string& name);

}  // namespace motx
