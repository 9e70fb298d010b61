#pragma once

namespace fgcp {

inline constexpr const char* kVersion = "0.1.0";

}
