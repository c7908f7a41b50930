#pragma once

#include <stdexcept>

namespace uat {

/// Precondition or domain violation (bad indices, mismatched dimensions,
/// nonpositive amplitudes, critical-angle evaluation, ...).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File-level failure: missing file, unparsable header, short read/write.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uat
