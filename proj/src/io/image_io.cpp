#include "fathom/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "fathom/errors.hpp"

namespace fathom::io {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

float to_unit(unsigned value, unsigned maxval) {
  return static_cast<float>(static_cast<double>(value) / static_cast<double>(maxval));
}

unsigned to_level(float value, unsigned maxval) {
  const double clamped = std::clamp(static_cast<double>(value), 0.0, 1.0);
  return static_cast<unsigned>(std::lround(clamped * static_cast<double>(maxval)));
}

// --- PNM (binary P5/P6, maxval 255 or 65535, big-endian 16-bit samples) ----

int pnm_token(std::istream& in) {
  // Skips whitespace and '#' comments, then reads one non-negative integer.
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    } else {
      c = in.get();
    }
  }
  if (c == EOF) raise(Errc::FormatError, "truncated PNM header");
  int value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    c = in.get();
  }
  return value;
}

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open " + path.string());
  char p, tag;
  in.get(p);
  in.get(tag);
  if (!in || p != 'P' || (tag != '5' && tag != '6')) {
    raise(Errc::FormatError, "expected binary P5/P6 PNM in " + path.string());
  }
  const int channels = (tag == '6') ? 3 : 1;
  const int width = pnm_token(in);
  const int height = pnm_token(in);
  const int maxval = pnm_token(in);
  if (width <= 0 || height <= 0 || (maxval != 255 && maxval != 65535)) {
    raise(Errc::FormatError, "unsupported PNM header in " + path.string());
  }

  Image image(width, height, channels);
  const size_t samples = image.cell_count();
  if (maxval == 255) {
    std::vector<unsigned char> raw(samples);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
    if (!in) raise(Errc::FormatError, "truncated PNM data in " + path.string());
    for (size_t i = 0; i < samples; ++i) image.data[i] = to_unit(raw[i], 255);
  } else {
    std::vector<unsigned char> raw(samples * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) raise(Errc::FormatError, "truncated PNM data in " + path.string());
    for (size_t i = 0; i < samples; ++i) {
      const unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
      image.data[i] = to_unit(v, 65535);
    }
  }
  return image;
}

void write_pnm(const std::filesystem::path& path, const Image& image, int bit_depth) {
  if (image.channels != 1 && image.channels != 3) {
    raise(Errc::InvalidArgument, "PNM supports 1 or 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::IoError, "cannot open " + path.string() + " for writing");
  const unsigned maxval = (bit_depth == 16) ? 65535 : 255;
  out << (image.channels == 3 ? "P6" : "P5") << '\n'
      << image.width << ' ' << image.height << '\n'
      << maxval << '\n';
  const size_t samples = image.cell_count();
  if (maxval == 255) {
    std::vector<unsigned char> raw(samples);
    for (size_t i = 0; i < samples; ++i) {
      raw[i] = static_cast<unsigned char>(to_level(image.data[i], 255));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(samples));
  } else {
    std::vector<unsigned char> raw(samples * 2);
    for (size_t i = 0; i < samples; ++i) {
      const unsigned v = to_level(image.data[i], 65535);
      raw[2 * i] = static_cast<unsigned char>(v >> 8);
      raw[2 * i + 1] = static_cast<unsigned char>(v & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
  }
  if (!out) raise(Errc::IoError, "failed writing " + path.string());
}

// --- PNG via libpng ----------------------------------------------------------

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* file = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

struct PngWriteCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* file = nullptr;
  ~PngWriteCloser() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (file) std::fclose(file);
  }
};

Image read_png(const std::filesystem::path& path) {
  PngReadCloser ctx;
  ctx.file = std::fopen(path.c_str(), "rb");
  if (!ctx.file) raise(Errc::IoError, "cannot open " + path.string());
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info || setjmp(png_jmpbuf(ctx.png))) {
    raise(Errc::FormatError, "failed decoding PNG " + path.string());
  }
  png_init_io(ctx.png, ctx.file);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(ctx.png, ctx.info) < 8) {
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  }
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int channels = png_get_channels(ctx.png, ctx.info);
  if ((bit_depth != 8 && bit_depth != 16) || (channels != 1 && channels != 3)) {
    raise(Errc::FormatError, "unsupported PNG layout in " + path.string());
  }

  const size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> raw(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raw.data() + y * row_bytes;
  png_read_image(ctx.png, rows.data());

  Image image(static_cast<int>(width), static_cast<int>(height), channels);
  const unsigned maxval = (bit_depth == 16) ? 65535 : 255;
  size_t i = 0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = rows[y];
    for (size_t s = 0; s < static_cast<size_t>(width) * channels; ++s) {
      unsigned v;
      if (bit_depth == 16) {
        v = (static_cast<unsigned>(row[2 * s]) << 8) | row[2 * s + 1];  // PNG is big-endian
      } else {
        v = row[s];
      }
      image.data[i++] = to_unit(v, maxval);
    }
  }
  return image;
}

void write_png(const std::filesystem::path& path, const Image& image, int bit_depth) {
  if (image.channels != 1 && image.channels != 3) {
    raise(Errc::InvalidArgument, "PNG output supports 1 or 3 channels");
  }
  PngWriteCloser ctx;
  ctx.file = std::fopen(path.c_str(), "wb");
  if (!ctx.file) raise(Errc::IoError, "cannot open " + path.string() + " for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info || setjmp(png_jmpbuf(ctx.png))) {
    raise(Errc::IoError, "failed encoding PNG " + path.string());
  }
  png_init_io(ctx.png, ctx.file);
  const int color_type = (image.channels == 3) ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  const unsigned maxval = (bit_depth == 16) ? 65535 : 255;
  const size_t samples_per_row = static_cast<size_t>(image.width) * image.channels;
  const size_t bytes_per_row = samples_per_row * (bit_depth / 8);
  std::vector<unsigned char> row(bytes_per_row);
  for (int y = 0; y < image.height; ++y) {
    for (size_t s = 0; s < samples_per_row; ++s) {
      const unsigned v = to_level(image.data[static_cast<size_t>(y) * samples_per_row + s], maxval);
      if (bit_depth == 16) {
        row[2 * s] = static_cast<unsigned char>(v >> 8);
        row[2 * s + 1] = static_cast<unsigned char>(v & 0xff);
      } else {
        row[s] = static_cast<unsigned char>(v);
      }
    }
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".pgm" || ext == ".ppm") return read_pnm(path);
  raise(Errc::InvalidArgument, "unsupported image extension '" + ext + "'");
}

void write_image(const std::filesystem::path& path, const Image& image, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    raise(Errc::InvalidArgument, "bit depth must be 8 or 16");
  }
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(path, image, bit_depth);
  } else if (ext == ".pgm" || ext == ".ppm") {
    write_pnm(path, image, bit_depth);
  } else {
    raise(Errc::InvalidArgument, "unsupported image extension '" + ext + "'");
  }
}

}  // namespace fathom::io
