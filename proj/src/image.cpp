#include "jrs/image.hpp"

#include <sstream>
#include <stdexcept>

namespace jrs {

ImageField::ImageField(const PixelGrid& g) : grid(g), values(Matrix::Zero(g.pixels(), g.channels)) {
  if (!g.valid()) throw std::invalid_argument("ImageField: invalid pixel grid");
}

ImageField::ImageField(const PixelGrid& g, Matrix v) : grid(g), values(std::move(v)) { validate(); }

ImageField ImageField::constant(const PixelGrid& g, double value) {
  return ImageField(g, Matrix::Constant(g.pixels(), g.channels, value));
}

void ImageField::validate() const {
  if (!grid.valid()) throw std::invalid_argument("ImageField: invalid pixel grid");
  if (values.rows() != grid.pixels() || values.cols() != grid.channels) {
    std::ostringstream msg;
    msg << "ImageField: values are " << values.rows() << "x" << values.cols() << " but grid is "
        << grid.height << "x" << grid.width << "x" << grid.channels;
    throw std::invalid_argument(msg.str());
  }
  if (!values.allFinite()) throw std::invalid_argument("ImageField: non-finite entry");
}

void require_same_shape(const ImageField& a, const ImageField& b, const char* what) {
  if (!(a.grid == b.grid) || a.values.rows() != b.values.rows() ||
      a.values.cols() != b.values.cols()) {
    throw std::invalid_argument(std::string(what) + ": image shapes differ");
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace jrs
