#pragma once

namespace tightwin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tightwin
