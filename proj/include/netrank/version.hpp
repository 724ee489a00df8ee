#pragma once

namespace netrank {

// Tool/library version embedded in every serialized artifact.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace netrank
