#include "jrs/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

namespace jrs {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

bool has_png_signature(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  unsigned char sig[8] = {};
  in.read(reinterpret_cast<char*>(sig), 8);
  return in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

ImageField read_png(const std::string& path) {
  File fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng: cannot create info struct");
  }
  std::vector<unsigned char> data;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int depth = 0, channels = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng: failed to decode " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (png_get_bit_depth(png, info) == 16) png_set_swap(png);  // host little-endian order
  png_read_update_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  depth = png_get_bit_depth(png, info);
  channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = data.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageField img(PixelGrid{static_cast<Index>(height), static_cast<Index>(width), channels});
  const double peak = depth == 16 ? 65535.0 : 255.0;
  for (Index r = 0; r < img.grid.height; ++r) {
    for (Index c = 0; c < img.grid.width; ++c) {
      for (Index s = 0; s < channels; ++s) {
        const std::size_t k = static_cast<std::size_t>(c * channels + s);
        double v;
        if (depth == 16) {
          const unsigned char* p = rows[r] + 2 * k;
          v = static_cast<double>(p[0] | (p[1] << 8));
        } else {
          v = rows[r][k];
        }
        img.at(r, c, s) = v / peak;
      }
    }
  }
  return img;
}

// Netpbm tokens skip whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

ImageField read_netpbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::string magic = next_token(in);
  int channels;
  bool ascii;
  if (magic == "P2") channels = 1, ascii = true;
  else if (magic == "P3") channels = 3, ascii = true;
  else if (magic == "P5") channels = 1, ascii = false;
  else if (magic == "P6") channels = 3, ascii = false;
  else throw std::runtime_error(path + ": not a PNG, PGM or PPM file");
  Index width, height;
  long maxval;
  try {
    width = std::stol(next_token(in));
    height = std::stol(next_token(in));
    maxval = std::stol(next_token(in));
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": malformed netpbm header");
  }
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error(path + ": invalid netpbm header values");
  }
  ImageField img(PixelGrid{height, width, channels});
  const double peak = static_cast<double>(maxval);
  for (Index i = 0; i < img.grid.pixels(); ++i) {
    for (Index s = 0; s < channels; ++s) {
      long v;
      if (ascii) {
        const std::string tok = next_token(in);
        if (tok.empty()) throw std::runtime_error(path + ": truncated pixel data");
        v = std::stol(tok);
      } else if (maxval < 256) {
        const int b = in.get();
        if (b == EOF) throw std::runtime_error(path + ": truncated pixel data");
        v = b;
      } else {
        const int hi = in.get(), lo = in.get();
        if (lo == EOF) throw std::runtime_error(path + ": truncated pixel data");
        v = (hi << 8) | lo;
      }
      img.values(i, s) = static_cast<double>(v) / peak;
    }
  }
  return img;
}

void write_png_bytes(const std::string& path, const std::vector<unsigned char>& bytes,
                     Index height, Index width, int channels) {
  File fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng: cannot create info struct");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng: failed to encode " + path);
  }
  png_init_io(png, fp.get());
  const int color = channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (Index r = 0; r < height; ++r) {
    rows[r] = const_cast<png_bytep>(bytes.data() + r * width * channels);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

ImageField read_image(const std::string& path) {
  return has_png_signature(path) ? read_png(path) : read_netpbm(path);
}

Vector read_mask(const std::string& path, PixelGrid* grid) {
  const ImageField img = read_image(path);
  if (grid) *grid = PixelGrid{img.grid.height, img.grid.width, 1};
  return img.values.rowwise().mean();
}

void write_png(const std::string& path, const ImageField& image) {
  const Index channels = image.grid.channels;
  if (channels != 1 && channels != 3) {
    throw std::invalid_argument("write_png: only 1- and 3-channel images are supported");
  }
  std::vector<unsigned char> bytes(static_cast<std::size_t>(image.values.size()));
  for (Index i = 0; i < image.grid.pixels(); ++i) {
    for (Index s = 0; s < channels; ++s) {
      const double v = std::min(1.0, std::max(0.0, image.values(i, s)));
      bytes[static_cast<std::size_t>(i * channels + s)] =
          static_cast<unsigned char>(std::lround(255.0 * v));
    }
  }
  write_png_bytes(path, bytes, image.grid.height, image.grid.width, static_cast<int>(channels));
}

void write_mask_png(const std::string& path, const Vector& u, Index height, Index width) {
  if (u.size() < height * width) throw std::invalid_argument("write_mask_png: too few labels");
  std::vector<unsigned char> bytes(static_cast<std::size_t>(height * width));
  for (Index i = 0; i < height * width; ++i) bytes[i] = u(i) >= 0.5 ? 255 : 0;
  write_png_bytes(path, bytes, height, width, 1);
}

}  // namespace jrs
