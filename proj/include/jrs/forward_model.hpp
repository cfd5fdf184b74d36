#pragma once

#include "jrs/image.hpp"

namespace jrs {

enum class ModelKind { identity, motion_blur };

/// Linear forward operator T with its adjoint.
///
/// Motion blur is a horizontal 1 x L mean filter applied per channel with
/// symmetric padding (a b c | c b a). Odd lengths are centred and the operator
/// is self-adjoint; even lengths take one more sample on the left and use a
/// separate scatter adjoint.
class ForwardModel {
 public:
  static ForwardModel identity();
  static ForwardModel motion_blur(Index length);

  ModelKind kind() const { return kind_; }
  Index blur_length() const { return length_; }
  bool self_adjoint() const { return kind_ == ModelKind::identity || length_ % 2 == 1; }

  /// Throws std::invalid_argument if the model cannot act on images of this grid.
  void validate(const PixelGrid& grid) const;

  ImageField apply(const ImageField& x) const;
  ImageField adjoint(const ImageField& w) const;
  /// T^* T x.
  ImageField normal(const ImageField& x) const { return adjoint(apply(x)); }

  /// Schur bound sqrt(max row sum * max column sum). Rows of the filter sum to 1;
  /// with the padding above columns sum to 1 for odd L and at most (L + 1) / L for even L.
  double operator_norm_bound() const;

 private:
  ForwardModel(ModelKind kind, Index length) : kind_(kind), length_(length) {}

  ModelKind kind_;
  Index length_;
};

}  // namespace jrs
