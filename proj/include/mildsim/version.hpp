#pragma once

namespace mildsim {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kManifestSchemaVersion = 1;

} // namespace mildsim
