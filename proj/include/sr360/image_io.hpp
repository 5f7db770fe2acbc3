// Copyright 2026 The sr360 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Image file I/O: 8/16-bit PNG (via libpng) and binary PPM/PGM. Integer
// codes map to [0,1] by division with the type maximum; saving rounds
// half away from zero. 16-bit samples are big-endian in both formats.

#ifndef SR360_IMAGE_IO_HPP_
#define SR360_IMAGE_IO_HPP_

#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sr360/image.hpp"

namespace sr360 {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageInfo {
  int width = 0;
  int height = 0;
  int channels = 0;   // after palette expansion / alpha stripping
  int bit_depth = 0;  // 8 or 16
};

namespace detail_io {

struct CFile {
  std::FILE* fp = nullptr;
  explicit CFile(const std::filesystem::path& path, const char* mode) {
    fp = std::fopen(path.string().c_str(), mode);
  }
  ~CFile() {
    if (fp) std::fclose(fp);
  }
  CFile(const CFile&) = delete;
  CFile& operator=(const CFile&) = delete;
};

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

inline bool has_png_signature(std::FILE* fp) {
  unsigned char sig[8];
  const std::size_t n = std::fread(sig, 1, 8, fp);
  std::rewind(fp);
  return n == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

inline ErpImage load_png(const std::filesystem::path& path) {
  CFile file(path, "rb");
  if (!file.fp) throw IoError("cannot open " + path.string());
  PngReader r;
  if (!r.png || !r.info) throw IoError("libpng allocation failure");

  std::vector<png_byte> raw;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0, depth = 0;

  if (setjmp(png_jmpbuf(r.png))) {
    throw FormatError("corrupt PNG: " + path.string());
  }
  png_init_io(r.png, file.fp);
  png_read_info(r.png, r.info);

  const png_byte color_type = png_get_color_type(r.png, r.info);
  const png_byte bit_depth = png_get_bit_depth(r.png, r.info);
  if (bit_depth != 8 && bit_depth != 16) {
    throw FormatError("unsupported PNG bit depth " +
                      std::to_string(bit_depth) + ": " + path.string());
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(r.png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA ||
      png_get_valid(r.png, r.info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(r.png);
  }
  png_set_interlace_handling(r.png);
  png_read_update_info(r.png, r.info);

  width = static_cast<int>(png_get_image_width(r.png, r.info));
  height = static_cast<int>(png_get_image_height(r.png, r.info));
  channels = png_get_channels(r.png, r.info);
  depth = png_get_bit_depth(r.png, r.info);
  if (channels != 1 && channels != 3) {
    throw FormatError("unsupported PNG channel layout: " + path.string());
  }

  const std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
  raw.resize(rowbytes * static_cast<std::size_t>(height));
  rows.resize(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] =
        raw.data() + static_cast<std::size_t>(y) * rowbytes;
  }
  png_read_image(r.png, rows.data());

  std::vector<double> samples(static_cast<std::size_t>(width) * height *
                              channels);
  const double maxval = depth == 16 ? 65535.0 : 255.0;
  const std::size_t n = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    const png_byte* rowbuf = rows[static_cast<std::size_t>(y)];
    double* dst =
        samples.data() + static_cast<std::size_t>(y) * width * channels;
    if (depth == 16) {
      for (std::size_t i = 0; i < n; ++i) {
        const unsigned code = (static_cast<unsigned>(rowbuf[2 * i]) << 8) |
                              rowbuf[2 * i + 1];
        dst[i] = code / maxval;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        dst[i] = rowbuf[i] / maxval;
      }
    }
  }
  return ErpImage(width, height, channels, std::move(samples));
}

inline void save_png(const ErpImage& image, const std::filesystem::path& path,
                     int bit_depth) {
  CFile file(path, "wb");
  if (!file.fp) throw IoError("cannot write " + path.string());
  PngWriter w;
  if (!w.png || !w.info) throw IoError("libpng allocation failure");

  const int channels = image.channels();
  const std::size_t rowlen = static_cast<std::size_t>(image.width()) *
                             channels * (bit_depth == 16 ? 2 : 1);
  std::vector<png_byte> rowbuf(rowlen);

  if (setjmp(png_jmpbuf(w.png))) {
    throw IoError("PNG write failure: " + path.string());
  }
  png_init_io(w.png, file.fp);
  png_set_compression_level(w.png, 6);
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);

  const double maxval = bit_depth == 16 ? 65535.0 : 255.0;
  for (int y = 0; y < image.height(); ++y) {
    const double* src = image.row(y);
    const std::size_t n = static_cast<std::size_t>(image.width()) * channels;
    if (bit_depth == 16) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto code = static_cast<unsigned>(std::lround(src[i] * maxval));
        rowbuf[2 * i] = static_cast<png_byte>(code >> 8);
        rowbuf[2 * i + 1] = static_cast<png_byte>(code & 0xff);
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        rowbuf[i] =
            static_cast<png_byte>(std::lround(src[i] * maxval));
      }
    }
    png_write_row(w.png, rowbuf.data());
  }
  png_write_end(w.png, nullptr);
}

// Reads one PNM header token, skipping whitespace and # comments.
inline std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch = in.get();
  while (in) {
    if (ch == '#') {
      while (in && ch != '\n') ch = in.get();
    } else if (std::isspace(ch)) {
      ch = in.get();
    } else {
      break;
    }
  }
  while (in && !std::isspace(ch)) {
    tok.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return tok;
}

struct PnmHeader {
  std::string magic;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

inline PnmHeader parse_pnm_header(std::istream& in,
                                  const std::filesystem::path& path) {
  PnmHeader h;
  h.magic = pnm_token(in);
  if (h.magic != "P5" && h.magic != "P6") {
    throw FormatError("unsupported image format: " + path.string());
  }
  try {
    h.width = std::stoi(pnm_token(in));
    h.height = std::stoi(pnm_token(in));
    h.maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw FormatError("bad PNM header: " + path.string());
  }
  if (h.width <= 0 || h.height <= 0) {
    throw FormatError("bad PNM dimensions: " + path.string());
  }
  if (h.maxval != 255 && h.maxval != 65535) {
    throw FormatError("unsupported PNM maxval " + std::to_string(h.maxval) +
                      ": " + path.string());
  }
  return h;
}

inline ErpImage load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const PnmHeader h = parse_pnm_header(in, path);
  const int channels = h.magic == "P6" ? 3 : 1;
  const int bytes = h.maxval == 65535 ? 2 : 1;
  const std::size_t n =
      static_cast<std::size_t>(h.width) * h.height * channels;
  std::vector<unsigned char> raw(n * bytes);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw FormatError("truncated PNM data: " + path.string());
  }
  std::vector<double> samples(n);
  const double maxval = h.maxval;
  if (bytes == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned code =
          (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
      samples[i] = code / maxval;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) samples[i] = raw[i] / maxval;
  }
  return ErpImage(h.width, h.height, channels, std::move(samples));
}

inline void save_pnm(const ErpImage& image, const std::filesystem::path& path,
                     int bit_depth, bool color) {
  if (color && image.channels() != 3) {
    throw std::invalid_argument("save_image: PPM requires 3 channels");
  }
  if (!color && image.channels() != 1) {
    throw std::invalid_argument("save_image: PGM requires 1 channel");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const int maxcode = bit_depth == 16 ? 65535 : 255;
  out << (color ? "P6" : "P5") << "\n"
      << image.width() << " " << image.height() << "\n"
      << maxcode << "\n";
  const std::span<const double> src = image.samples();
  std::vector<unsigned char> raw(src.size() * (bit_depth == 16 ? 2 : 1));
  if (bit_depth == 16) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto code = static_cast<unsigned>(std::lround(src[i] * 65535.0));
      raw[2 * i] = static_cast<unsigned char>(code >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(code & 0xff);
    }
  } else {
    for (std::size_t i = 0; i < src.size(); ++i) {
      raw[i] = static_cast<unsigned char>(std::lround(src[i] * 255.0));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw IoError("write failure: " + path.string());
}

}  // namespace detail_io

// Loads an 8/16-bit PNG or binary PPM/PGM, dispatching on file content.
// Palette PNGs expand to RGB; alpha is dropped.
inline ErpImage load_image(const std::filesystem::path& path) {
  {
    detail_io::CFile probe(path, "rb");
    if (!probe.fp) throw IoError("cannot open " + path.string());
    if (detail_io::has_png_signature(probe.fp)) {
      return detail_io::load_png(path);
    }
  }
  return detail_io::load_pnm(path);
}

// Saves as PNG, PPM or PGM according to the file extension. Samples are
// quantized with round-half-up to the requested bit depth.
inline void save_image(const ErpImage& image,
                       const std::filesystem::path& path, int bit_depth = 8) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw std::invalid_argument("save_image: bit depth must be 8 or 16");
  }
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".png") {
    detail_io::save_png(image, path, bit_depth);
  } else if (ext == ".ppm") {
    detail_io::save_pnm(image, path, bit_depth, true);
  } else if (ext == ".pgm") {
    detail_io::save_pnm(image, path, bit_depth, false);
  } else {
    throw std::invalid_argument("save_image: unsupported extension " + ext);
  }
}

// Reads width/height/channels/bit depth from the file header without
// decoding pixel data.
inline ImageInfo probe_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  static const unsigned char png_sig[8] = {0x89, 'P',  'N',  'G',
                                           0x0d, 0x0a, 0x1a, 0x0a};
  if (in.gcount() == 8 && std::memcmp(sig, png_sig, 8) == 0) {
    unsigned char ihdr[17];
    in.read(reinterpret_cast<char*>(ihdr), 17);  // len+type+IHDR payload
    if (in.gcount() != 17 || std::memcmp(ihdr + 4, "IHDR", 4) != 0) {
      throw FormatError("corrupt PNG header: " + path.string());
    }
    auto be32 = [](const unsigned char* p) {
      return (static_cast<std::uint32_t>(p[0]) << 24) |
             (static_cast<std::uint32_t>(p[1]) << 16) |
             (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
    };
    ImageInfo info;
    info.width = static_cast<int>(be32(ihdr + 8));
    info.height = static_cast<int>(be32(ihdr + 12));
    const int depth = ihdr[16];
    // color type follows the bit depth byte
    unsigned char color_type = 0;
    in.read(reinterpret_cast<char*>(&color_type), 1);
    if (depth != 8 && depth != 16) {
      throw FormatError("unsupported PNG bit depth: " + path.string());
    }
    switch (color_type) {
      case 0: case 4: info.channels = 1; break;
      case 2: case 3: case 6: info.channels = 3; break;
      default:
        throw FormatError("unsupported PNG color type: " + path.string());
    }
    info.bit_depth = color_type == 3 ? 8 : depth;
    return info;
  }
  in.clear();
  in.seekg(0);
  const detail_io::PnmHeader h = detail_io::parse_pnm_header(in, path);
  ImageInfo info;
  info.width = h.width;
  info.height = h.height;
  info.channels = h.magic == "P6" ? 3 : 1;
  info.bit_depth = h.maxval == 65535 ? 16 : 8;
  return info;
}

}  // namespace sr360

#endif  // SR360_IMAGE_IO_HPP_
