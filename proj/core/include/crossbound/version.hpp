#pragma once

namespace crossbound {

/// Version string embedded in result records and cache keys so that
/// persisted data is never reused across incompatible code revisions.
inline constexpr const char* kVersion = "crossbound-0.1.0";

}  // namespace crossbound
