#pragma once

namespace ombell {

inline constexpr const char* artifact_version = "1.0.0";

}  // namespace ombell
