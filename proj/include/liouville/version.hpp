#pragma once

namespace lv {

inline constexpr const char* version = "0.1.0";

}  // namespace lv
