#pragma once

namespace cna {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cna
