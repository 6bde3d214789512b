#pragma once

#include <stdexcept>

namespace snft {

// Raised when a cross-check that must hold by construction fails; callers
// should treat this as an internal defect, not bad input.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace snft
