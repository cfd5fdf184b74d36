#pragma once

#include "jrs/image.hpp"

#include <string>

namespace jrs {

/// Reads an 8- or 16-bit PNG (palette and low bit depths are expanded, alpha is
/// dropped) or a PGM/PPM in ASCII (P2/P3) or binary (P5/P6) form. Values are
/// scaled to [0, 1]. Throws std::runtime_error on unreadable input.
ImageField read_image(const std::string& path);

/// Single-channel label mask; multi-channel files are averaged. Values in [0, 1].
Vector read_mask(const std::string& path, PixelGrid* grid = nullptr);

/// 8-bit PNG with values clamped to [0, 1].
void write_png(const std::string& path, const ImageField& image);

/// 0/255 single-channel PNG of u >= 1/2.
void write_mask_png(const std::string& path, const Vector& u, Index height, Index width);

}  // namespace jrs
