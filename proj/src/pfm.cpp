#include "varidepth/pfm.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "varidepth/error.hpp"

namespace varidepth {

namespace {

// The scale token doubles as the byte-order marker; negative means
// little-endian, which is the only variant written or accepted here.
std::string next_token(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw FormatError("truncated portable-float-map header");
  return tok;
}

} // namespace

void write_pfm(const std::string& path, const Grid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out << "Pf\n" << grid.cols() << " " << grid.rows() << "\n-1.0\n";
  std::vector<float> row(size_t(grid.cols()));
  for (Eigen::Index v = grid.rows() - 1; v >= 0; --v) {
    for (Eigen::Index u = 0; u < grid.cols(); ++u) row[size_t(u)] = float(grid(v, u));
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * 4));
  }
  if (!out) throw FormatError("write failed: " + path);
}

Grid read_pfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);

  const std::string magic = next_token(in);
  if (magic != "Pf") throw FormatError("not a grayscale portable-float-map: " + path);
  long w = 0, h = 0;
  double scale = 0.0;
  try {
    w = std::stol(next_token(in));
    h = std::stol(next_token(in));
    scale = std::stod(next_token(in));
  } catch (const std::exception&) {
    throw FormatError("malformed portable-float-map header: " + path);
  }
  if (w <= 0 || h <= 0) throw FormatError("non-positive dimensions: " + path);
  if (!(scale < 0.0)) throw FormatError("big-endian portable-float-map not supported: " + path);
  in.get(); // single whitespace byte after the header

  Grid grid(h, w);
  std::vector<float> row(static_cast<size_t>(w));
  for (long v = h - 1; v >= 0; --v) {
    in.read(reinterpret_cast<char*>(row.data()), std::streamsize(row.size() * 4));
    if (!in) throw FormatError("truncated sample data: " + path);
    for (long u = 0; u < w; ++u) grid(v, u) = double(row[size_t(u)]);
  }
  return grid;
}

void write_depth_pfm(const std::string& path, const DepthMap& depth) {
  Grid data = depth.valid.select(depth.data, Grid::Zero(depth.data.rows(), depth.data.cols()));
  write_pfm(path, data);
}

DepthMap read_depth_pfm(const std::string& path) {
  Grid data = read_pfm(path);
  Mask valid(data.rows(), data.cols());
  for (Eigen::Index v = 0; v < data.rows(); ++v)
    for (Eigen::Index u = 0; u < data.cols(); ++u)
      valid(v, u) = std::isfinite(data(v, u)) && data(v, u) > 0.0;
  return DepthMap(std::move(data), std::move(valid));
}

} // namespace varidepth
