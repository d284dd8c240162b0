#pragma once

#ifndef ACP_VERSION
#define ACP_VERSION "0.0.0"
#endif

namespace acp {

inline constexpr const char* kVersion = ACP_VERSION;

}  // namespace acp
