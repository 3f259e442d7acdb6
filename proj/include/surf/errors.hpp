#pragma once

#include <stdexcept>
#include <string>

namespace surf {

// decoder gave up after exhausting its restart budget
struct RestartBudgetExceeded : std::runtime_error {
    explicit RestartBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// erasure columns were linearly dependent; caller decides whether to retry
struct DependentErasureColumns : std::runtime_error {
    explicit DependentErasureColumns(const std::string& what) : std::runtime_error(what) {}
};

// an iteration-bounded loop (rejection sampling etc.) ran out of budget
struct IterationBudgetExceeded : std::runtime_error {
    explicit IterationBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// hull of the code is trivial, nothing to match on
struct EmptyHull : std::runtime_error {
    explicit EmptyHull(const std::string& what) : std::runtime_error(what) {}
};

// rejection-sampling constants cannot be built for these parameters
struct InfeasibleAlignment : std::runtime_error {
    explicit InfeasibleAlignment(const std::string& what) : std::runtime_error(what) {}
};

// malformed or truncated file content
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace surf
