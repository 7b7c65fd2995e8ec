#pragma once

namespace fwn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fwn
