#pragma once

#include <filesystem>

#include "fathom/color.hpp"

namespace fathom::io {

// Reads an 8- or 16-bit image into normalized [0, 1] floats. Format by
// extension: .png (grayscale or RGB), .pgm (grayscale), .ppm (RGB).
Image read_image(const std::filesystem::path& path);

// Writes an image at the given bit depth (8 or 16). Values are clamped to
// [0, 1] and rounded to the nearest representable level.
void write_image(const std::filesystem::path& path, const Image& image, int bit_depth = 8);

}  // namespace fathom::io
