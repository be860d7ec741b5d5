#pragma once

namespace uavplan {

inline constexpr const char* kArtifactVersion = "0.1.0";

} // namespace uavplan
