#pragma once

#include <stdexcept>
#include <string>

namespace motx {

// All engine failures carry a stable machine-readable code next to the human
// message. The CLI maps codes to exit status: hypothesis violations and
// malformed inputs exit 2, ambiguity-only results exit 3, anything else 1.
struct EngineError : std::runtime_error {
    std::string code;
    EngineError(std::string code_, const std::string& what_)
        : std::runtime_error(what_), code(std::move(code_)) {}
};

inline EngineError malformedInput(const std::string& what) {
    return EngineError("malformed-input", what);
}

inline EngineError hypothesisViolation(const std::string& what) {
    return EngineError("hypothesis-violation", what);
}

inline EngineError internalError(const std::string& what) {
    return EngineError("internal", what);
}

// A computation cannot be certified within the given window because some
// differential or extension is undetermined. Treated like a hypothesis
// violation by the CLI: the caller must supply more data or a wider window.
inline EngineError incompleteInformation(const std::string& what) {
    return EngineError("incomplete-information", what);
}

}  // namespace motx
