#pragma once

namespace degen_dt {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace degen_dt
