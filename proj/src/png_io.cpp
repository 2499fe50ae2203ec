#include "varidepth/png_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "varidepth/error.hpp"

namespace varidepth {

namespace {

const unsigned char kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back((v >> 24) & 0xFF);
  out.push_back((v >> 16) & 0xFF);
  out.push_back((v >> 8) & 0xFF);
  out.push_back(v & 0xFF);
}

uint32_t read_u32(const unsigned char* p) {
  return (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
}

void write_chunk(std::ofstream& out, const char type[4],
                 const std::vector<unsigned char>& data) {
  std::vector<unsigned char> head;
  put_u32(head, uint32_t(data.size()));
  out.write(reinterpret_cast<const char*>(head.data()), 4);
  out.write(type, 4);
  if (!data.empty()) out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
  uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(type), 4);
  if (!data.empty()) crc = crc32(crc, data.data(), uInt(data.size()));
  std::vector<unsigned char> tail;
  put_u32(tail, uint32_t(crc));
  out.write(reinterpret_cast<const char*>(tail.data()), 4);
}

void write_png_raw(const std::string& path, int width, int height, int channels, int bit_depth,
                   const std::vector<unsigned char>& samples) {
  const size_t row_bytes = size_t(width) * size_t(channels) * size_t(bit_depth / 8);
  std::vector<unsigned char> raw;
  raw.reserve((row_bytes + 1) * size_t(height));
  for (int v = 0; v < height; ++v) {
    raw.push_back(0); // filter type None
    raw.insert(raw.end(), samples.begin() + long(v * row_bytes),
               samples.begin() + long((v + 1) * row_bytes));
  }

  uLongf bound = compressBound(uLong(raw.size()));
  std::vector<unsigned char> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(), uLong(raw.size()), 6) != Z_OK)
    throw FormatError("deflate failed");
  compressed.resize(bound);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(kSignature), 8);

  std::vector<unsigned char> ihdr;
  put_u32(ihdr, uint32_t(width));
  put_u32(ihdr, uint32_t(height));
  ihdr.push_back(uint8_t(bit_depth));
  ihdr.push_back(channels == 3 ? 2 : 0); // color type: truecolor or grayscale
  ihdr.push_back(0);                     // compression
  ihdr.push_back(0);                     // filter method
  ihdr.push_back(0);                     // no interlace
  write_chunk(out, "IHDR", ihdr);
  write_chunk(out, "IDAT", compressed);
  write_chunk(out, "IEND", {});
  if (!out) throw FormatError("write failed: " + path);
}

struct DecodedPng {
  int width = 0, height = 0, channels = 0, bit_depth = 0;
  std::vector<unsigned char> samples; // unfiltered, row-major
};

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

DecodedPng read_png_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
    throw FormatError("not a png file: " + path);

  DecodedPng png;
  std::vector<unsigned char> idat;
  size_t pos = 8;
  bool saw_ihdr = false;
  while (pos + 12 <= bytes.size()) {
    const uint32_t len = read_u32(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw FormatError("truncated chunk: " + path);
    const char* type = reinterpret_cast<const char*>(&bytes[pos + 4]);
    const unsigned char* data = &bytes[pos + 8];
    if (std::memcmp(type, "IHDR", 4) == 0) {
      if (len != 13) throw FormatError("malformed IHDR: " + path);
      png.width = int(read_u32(data));
      png.height = int(read_u32(data + 4));
      png.bit_depth = data[8];
      const int color_type = data[9];
      if (data[12] != 0) throw FormatError("interlaced png not supported: " + path);
      if (color_type == 0)
        png.channels = 1;
      else if (color_type == 2)
        png.channels = 3;
      else
        throw FormatError("unsupported png color type: " + path);
      if (png.bit_depth != 8 && png.bit_depth != 16)
        throw FormatError("unsupported png bit depth: " + path);
      if (png.width <= 0 || png.height <= 0) throw FormatError("bad png dimensions: " + path);
      saw_ihdr = true;
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), data, data + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (!saw_ihdr || idat.empty()) throw FormatError("missing png chunks: " + path);

  const size_t bpp = size_t(png.channels) * size_t(png.bit_depth / 8);
  const size_t row_bytes = bpp * size_t(png.width);
  const size_t raw_size = (row_bytes + 1) * size_t(png.height);
  std::vector<unsigned char> raw(raw_size);
  uLongf out_len = uLongf(raw_size);
  if (uncompress(raw.data(), &out_len, idat.data(), uLong(idat.size())) != Z_OK ||
      out_len != raw_size)
    throw FormatError("corrupt png stream: " + path);

  png.samples.assign(row_bytes * size_t(png.height), 0);
  std::vector<unsigned char> prev(row_bytes, 0);
  for (int v = 0; v < png.height; ++v) {
    const unsigned char filter = raw[size_t(v) * (row_bytes + 1)];
    const unsigned char* src = &raw[size_t(v) * (row_bytes + 1) + 1];
    unsigned char* dst = &png.samples[size_t(v) * row_bytes];
    for (size_t i = 0; i < row_bytes; ++i) {
      const int a = i >= bpp ? dst[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      int x = src[i];
      switch (filter) {
        case 0: break;
        case 1: x += a; break;
        case 2: x += b; break;
        case 3: x += (a + b) / 2; break;
        case 4: x += paeth(a, b, c); break;
        default: throw FormatError("unknown png filter: " + path);
      }
      dst[i] = uint8_t(x & 0xFF);
    }
    std::memcpy(prev.data(), dst, row_bytes);
  }
  return png;
}

} // namespace

void write_png(const std::string& path, const Image& image) {
  const int nc = image.channels();
  std::vector<unsigned char> samples;
  samples.reserve(size_t(image.width) * size_t(image.height) * size_t(nc));
  for (int v = 0; v < image.height; ++v)
    for (int u = 0; u < image.width; ++u)
      for (int c = 0; c < nc; ++c) {
        const double x = std::clamp(image.planes[size_t(c)](v, u), 0.0, 1.0);
        samples.push_back(uint8_t(std::lround(x * 255.0)));
      }
  write_png_raw(path, image.width, image.height, nc, 8, samples);
}

Image read_png(const std::string& path) {
  const DecodedPng png = read_png_raw(path);
  if (png.bit_depth != 8) throw FormatError("expected an 8-bit image png: " + path);
  Image img(png.width, png.height, png.channels, 0.0);
  size_t i = 0;
  for (int v = 0; v < png.height; ++v)
    for (int u = 0; u < png.width; ++u)
      for (int c = 0; c < png.channels; ++c)
        img.planes[size_t(c)](v, u) = double(png.samples[i++]) / 255.0;
  return img;
}

void write_depth_png16(const std::string& path, const DepthMap& depth) {
  std::vector<unsigned char> samples;
  samples.reserve(size_t(depth.width) * size_t(depth.height) * 2);
  for (int v = 0; v < depth.height; ++v)
    for (int u = 0; u < depth.width; ++u) {
      long mm = 0;
      if (depth.valid(v, u)) {
        mm = std::lround(depth.data(v, u) * 1000.0);
        if (mm < 0) mm = 0;
        if (mm > 65535)
          throw FormatError("depth exceeds the 65.535 m range of 16-bit millimeter encoding");
      }
      samples.push_back(uint8_t((mm >> 8) & 0xFF)); // 16-bit png samples are big-endian
      samples.push_back(uint8_t(mm & 0xFF));
    }
  write_png_raw(path, depth.width, depth.height, 1, 16, samples);
}

DepthMap read_depth_png16(const std::string& path) {
  const DecodedPng png = read_png_raw(path);
  if (png.bit_depth != 16 || png.channels != 1)
    throw FormatError("expected a 16-bit grayscale depth png: " + path);
  DepthMap depth(png.width, png.height);
  size_t i = 0;
  for (int v = 0; v < png.height; ++v)
    for (int u = 0; u < png.width; ++u) {
      const uint32_t mm = (uint32_t(png.samples[i]) << 8) | png.samples[i + 1];
      i += 2;
      if (mm > 0) {
        depth.data(v, u) = double(mm) / 1000.0;
        depth.valid(v, u) = true;
      }
    }
  return depth;
}

} // namespace varidepth
