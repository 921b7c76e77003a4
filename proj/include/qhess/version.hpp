#pragma once

namespace qhess {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace qhess
