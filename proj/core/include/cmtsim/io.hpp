#pragma once

#include <string>

namespace cmtsim {

// 17-significant-digit decimal rendering; round-trips every double.
std::string format17(double x);

// Write content to path atomically (temp file in the same directory, then
// rename).
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace cmtsim
