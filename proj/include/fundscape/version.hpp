#pragma once

namespace fundscape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fundscape
