#pragma once

// Per-Token Distance: for each text token, the mean absolute deviation of its
// index-space distances to every image token, averaged over text tokens.
//
// The kernels come in an OpenMP-parallel form and a serial reference form.
// Both accumulate each row in the same fixed order, so they agree bit for bit.

#include <span>
#include <string_view>
#include <vector>

#include "circle_rope/schemes.hpp"

namespace circle_rope {

enum class DistanceConvention {
  Scalar,     // |s - s'| on replicated (s, s, s) indices
  Planar,     // Euclidean on the (height, width) axes
  Euclidean,  // full 3D Euclidean
};

/// Scalar for the 1D schemes, planar for 2D spatial, 3D for circle.
DistanceConvention convention_for(SchemeKind scheme);
std::string_view convention_name(DistanceConvention convention);

double index_distance(const IndexPoint& a, const IndexPoint& b,
                      DistanceConvention convention);

/// Text rows x image columns, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t rows, std::size_t cols);
  DistanceMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

DistanceMatrix distance_matrix(std::span<const IndexPoint> text,
                               std::span<const IndexPoint> image,
                               DistanceConvention convention);
DistanceMatrix distance_matrix_serial(std::span<const IndexPoint> text,
                                      std::span<const IndexPoint> image,
                                      DistanceConvention convention);

/// Uses convention_for(seq.scheme). Throws when a modality is missing.
DistanceMatrix distance_matrix(const IndexedSequence& seq);
DistanceMatrix distance_matrix(const IndexedSequence& seq,
                               DistanceConvention convention);

double ptd(const DistanceMatrix& matrix);
double ptd_serial(const DistanceMatrix& matrix);

double ptd(const IndexedSequence& seq);

/// Mean over images of the PTD between all text tokens and that image's
/// tokens. Equals ptd(seq) for single-image sequences.
double ptd_per_image(const IndexedSequence& seq);

}  // namespace circle_rope
