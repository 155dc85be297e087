#pragma once

namespace kmlat {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kMatrixFormatVersion = 1;
inline constexpr int kCatalogFormatVersion = 1;

}  // namespace kmlat
