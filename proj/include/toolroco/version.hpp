#pragma once

namespace toolroco {

inline constexpr const char* kHarnessVersion = "1.0.0";
inline constexpr int kTraceSchemaVersion = 1;

}  // namespace toolroco
