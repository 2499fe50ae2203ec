#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "varidepth/types.hpp"

// Depth map + image -> textured point cloud, one point per valid pixel, and
// PLY export (ascii or binary little-endian, properties x y z red green blue).

namespace varidepth {

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::array<uint8_t, 3>> colors;

  size_t size() const { return points.size(); }
};

PointCloud depth_to_cloud(const DepthMap& depth, const Image& image, const CameraIntrinsics& K,
                          const RigidTransform& pose = RigidTransform::identity());

enum class PlyFormat { Ascii, BinaryLittleEndian };

void write_ply(const std::string& path, const PointCloud& cloud,
               PlyFormat format = PlyFormat::Ascii);

} // namespace varidepth
