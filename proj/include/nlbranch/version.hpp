#pragma once

namespace nlbranch {

inline constexpr const char* kVersion = "nlbranch 0.1.0";

}  // namespace nlbranch
