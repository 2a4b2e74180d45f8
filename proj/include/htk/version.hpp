#pragma once

namespace htk {

inline constexpr const char* kVersion = "htk 1.0.0";

}
