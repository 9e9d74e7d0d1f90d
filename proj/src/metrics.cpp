#include "circle_rope/metrics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace circle_rope {

namespace {

bool is_replicated(const IndexPoint& p) { return p[0] == p[1] && p[1] == p[2]; }

void check_inputs(std::span<const IndexPoint> text, std::span<const IndexPoint> image,
                  DistanceConvention convention) {
  if (text.empty() || image.empty()) {
    throw std::invalid_argument("PTD requires both modalities");
  }
  if (convention == DistanceConvention::Scalar) {
    for (auto pts : {text, image}) {
      for (const auto& p : pts) {
        if (!is_replicated(p)) {
          throw std::invalid_argument(
              "scalar distance requires replicated (s, s, s) indices");
        }
      }
    }
  }
}

void fill_row(DistanceMatrix& m, std::size_t r, const IndexPoint& t,
              std::span<const IndexPoint> image, DistanceConvention convention) {
  for (std::size_t c = 0; c < image.size(); ++c) {
    m.at(r, c) = index_distance(t, image[c], convention);
  }
}

// Sum of |d - mean| over one row, in fixed index order. The mean is taken
// relative to the first entry so a constant row yields exactly zero.
double row_deviation(std::span<const double> row) {
  const double pivot = row.front();
  double shifted = 0.0;
  for (double d : row) shifted += d - pivot;
  const double mean = pivot + shifted / static_cast<double>(row.size());
  double dev = 0.0;
  for (double d : row) dev += std::abs(d - mean);
  return dev;
}

double finish_ptd(std::span<const double> row_devs, std::size_t cols) {
  double total = 0.0;
  for (double d : row_devs) total += d;
  return total / (static_cast<double>(row_devs.size()) * static_cast<double>(cols));
}

}  // namespace

DistanceConvention convention_for(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::Hard:
    case SchemeKind::Unordered:
      return DistanceConvention::Scalar;
    case SchemeKind::Spatial:
      return DistanceConvention::Planar;
    case SchemeKind::Circle:
      return DistanceConvention::Euclidean;
  }
  return DistanceConvention::Euclidean;
}

std::string_view convention_name(DistanceConvention convention) {
  switch (convention) {
    case DistanceConvention::Scalar:
      return "scalar";
    case DistanceConvention::Planar:
      return "planar-hw";
    case DistanceConvention::Euclidean:
      return "euclidean-3d";
  }
  return "?";
}

double index_distance(const IndexPoint& a, const IndexPoint& b,
                      DistanceConvention convention) {
  switch (convention) {
    case DistanceConvention::Scalar:
      return std::abs(a[0] - b[0]);
    case DistanceConvention::Planar:
      return std::hypot(a[kHeightAxis] - b[kHeightAxis], a[kWidthAxis] - b[kWidthAxis]);
    case DistanceConvention::Euclidean:
      return distance(a, b);
  }
  return 0.0;
}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DistanceMatrix::DistanceMatrix(std::size_t rows, std::size_t cols,
                               std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows * cols) {
    throw std::invalid_argument("distance matrix size mismatch");
  }
  if (rows == 0 || cols == 0) throw std::invalid_argument("PTD requires both modalities");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("distances must be finite and non-negative");
    }
  }
}

DistanceMatrix distance_matrix(std::span<const IndexPoint> text,
                               std::span<const IndexPoint> image,
                               DistanceConvention convention) {
  check_inputs(text, image, convention);
  DistanceMatrix m(text.size(), image.size());
  const auto rows = static_cast<long long>(text.size());
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < rows; ++r) {
    fill_row(m, static_cast<std::size_t>(r), text[r], image, convention);
  }
  return m;
}

DistanceMatrix distance_matrix_serial(std::span<const IndexPoint> text,
                                      std::span<const IndexPoint> image,
                                      DistanceConvention convention) {
  check_inputs(text, image, convention);
  DistanceMatrix m(text.size(), image.size());
  for (std::size_t r = 0; r < text.size(); ++r) fill_row(m, r, text[r], image, convention);
  return m;
}

DistanceMatrix distance_matrix(const IndexedSequence& seq) {
  return distance_matrix(seq, convention_for(seq.scheme));
}

DistanceMatrix distance_matrix(const IndexedSequence& seq,
                               DistanceConvention convention) {
  const auto text = seq.indices(Modality::Text);
  const auto image = seq.indices(Modality::Image);
  return distance_matrix(text, image, convention);
}

double ptd(const DistanceMatrix& matrix) {
  std::vector<double> devs(matrix.rows());
  const auto rows = static_cast<long long>(matrix.rows());
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < rows; ++r) {
    devs[r] = row_deviation(matrix.row(static_cast<std::size_t>(r)));
  }
  return finish_ptd(devs, matrix.cols());
}

double ptd_serial(const DistanceMatrix& matrix) {
  std::vector<double> devs(matrix.rows());
  for (std::size_t r = 0; r < matrix.rows(); ++r) devs[r] = row_deviation(matrix.row(r));
  return finish_ptd(devs, matrix.cols());
}

double ptd(const IndexedSequence& seq) { return ptd(distance_matrix(seq)); }

double ptd_per_image(const IndexedSequence& seq) {
  const auto text = seq.indices(Modality::Text);
  const auto convention = convention_for(seq.scheme);
  std::map<int, std::vector<IndexPoint>> images;
  for (const auto& t : seq.tokens) {
    if (t.modality == Modality::Image) images[t.segment_id].push_back(t.index);
  }
  if (images.empty()) throw std::invalid_argument("PTD requires both modalities");
  double total = 0.0;
  for (const auto& [id, pts] : images) total += ptd(distance_matrix(text, pts, convention));
  return total / static_cast<double>(images.size());
}

}  // namespace circle_rope
