#pragma once

#include <string>

#include "varidepth/types.hpp"

// Portable float map, grayscale variant: header "Pf\n<w> <h>\n-1.0\n" followed
// by h rows of w little-endian float32 samples, bottom row first. Values round
// trip bit-identically at float32 precision.

namespace varidepth {

void write_pfm(const std::string& path, const Grid& grid);
Grid read_pfm(const std::string& path);

// Depth convention on top of the raw grid: invalid pixels are stored as 0;
// values <= 0 or non-finite read back as invalid.
void write_depth_pfm(const std::string& path, const DepthMap& depth);
DepthMap read_depth_pfm(const std::string& path);

} // namespace varidepth
