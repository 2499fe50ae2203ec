#pragma once

#include <string>

#include "varidepth/types.hpp"

// Minimal PNG codec backed by zlib: 8-bit grayscale/RGB images and 16-bit
// grayscale depth encoding round(meters * 1000), 0 = invalid. Palette, alpha,
// and interlaced files are rejected.

namespace varidepth {

void write_png(const std::string& path, const Image& image);
Image read_png(const std::string& path);

// Millimeter fixed-point depth; values above 65.535 m do not fit in 16 bits
// and raise FormatError.
void write_depth_png16(const std::string& path, const DepthMap& depth);
DepthMap read_depth_png16(const std::string& path);

} // namespace varidepth
