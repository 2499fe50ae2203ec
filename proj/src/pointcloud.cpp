#include "varidepth/pointcloud.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "varidepth/error.hpp"
#include "varidepth/geometry.hpp"

namespace varidepth {

PointCloud depth_to_cloud(const DepthMap& depth, const Image& image, const CameraIntrinsics& K,
                          const RigidTransform& pose) {
  if (depth.width != image.width || depth.height != image.height)
    throw DomainError("depth_to_cloud: depth and image shapes differ");

  PointCloud cloud;
  cloud.points.reserve(size_t(depth.valid_count()));
  cloud.colors.reserve(size_t(depth.valid_count()));
  auto to_byte = [](double x) {
    return uint8_t(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
  };

  for (int v = 0; v < depth.height; ++v)
    for (int u = 0; u < depth.width; ++u) {
      if (!depth.valid(v, u)) continue;
      cloud.points.push_back(pose.apply(backproject({double(u), double(v)}, depth.data(v, u), K)));
      if (image.channels() == 1) {
        const uint8_t g = to_byte(image.planes[0](v, u));
        cloud.colors.push_back({g, g, g});
      } else {
        cloud.colors.push_back({to_byte(image.planes[0](v, u)), to_byte(image.planes[1](v, u)),
                                to_byte(image.planes[2](v, u))});
      }
    }
  return cloud;
}

void write_ply(const std::string& path, const PointCloud& cloud, PlyFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);

  out << "ply\n"
      << (format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
      << "element vertex " << cloud.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";

  if (format == PlyFormat::Ascii) {
    char line[160];
    for (size_t i = 0; i < cloud.size(); ++i) {
      const Vec3& p = cloud.points[i];
      const auto& c = cloud.colors[i];
      std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %d %d %d\n", p.x(), p.y(), p.z(),
                    int(c[0]), int(c[1]), int(c[2]));
      out << line;
    }
  } else {
    for (size_t i = 0; i < cloud.size(); ++i) {
      const float xyz[3] = {float(cloud.points[i].x()), float(cloud.points[i].y()),
                            float(cloud.points[i].z())};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
      out.write(reinterpret_cast<const char*>(cloud.colors[i].data()), 3);
    }
  }
  if (!out) throw FormatError("write failed: " + path);
}

} // namespace varidepth
