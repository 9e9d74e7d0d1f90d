#include "circle_rope/rope.hpp"

#include <cmath>
#include <stdexcept>

namespace circle_rope {

void RotaryParams::validate() const {
  if (head_dim <= 0 || head_dim % 2 != 0) {
    throw std::invalid_argument("head_dim must be a positive even integer");
  }
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw std::invalid_argument("rotary base must be positive");
  }
  int total = 0;
  for (int s : sections) {
    if (s < 0) throw std::invalid_argument("sections must be non-negative");
    total += s;
  }
  if (total != head_dim / 2) {
    throw std::invalid_argument("sections must sum to head_dim / 2 (" +
                                std::to_string(head_dim / 2) + "), got " +
                                std::to_string(total));
  }
}

std::vector<PairFrequency> pair_frequencies(const RotaryParams& params) {
  params.validate();
  std::vector<PairFrequency> out;
  out.reserve(static_cast<std::size_t>(params.pairs()));
  for (std::size_t axis = 0; axis < 3; ++axis) {
    for (int d = 0; d < params.sections[axis]; ++d) {
      const double exponent = -2.0 * d / static_cast<double>(params.head_dim);
      out.push_back({axis, std::pow(params.base, exponent)});
    }
  }
  return out;
}

std::vector<double> rotation_angles(const IndexPoint& index, const RotaryParams& params) {
  const auto freqs = pair_frequencies(params);
  std::vector<double> angles;
  angles.reserve(freqs.size());
  for (const auto& f : freqs) angles.push_back(index[f.axis] * f.inv_freq);
  return angles;
}

HeadVector apply_rotary(std::span<const double> vec, std::span<const double> angles) {
  if (vec.size() != 2 * angles.size()) {
    throw std::invalid_argument("vector length must be twice the angle count");
  }
  HeadVector out(vec.size());
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const double c = std::cos(angles[j]);
    const double s = std::sin(angles[j]);
    const double x0 = vec[2 * j];
    const double x1 = vec[2 * j + 1];
    out[2 * j] = x0 * c - x1 * s;
    out[2 * j + 1] = x0 * s + x1 * c;
  }
  return out;
}

double logit(std::span<const double> q, const IndexPoint& q_index,
             std::span<const double> k, const IndexPoint& k_index,
             const RotaryParams& params) {
  if (q.size() != k.size() || q.size() != static_cast<std::size_t>(params.head_dim)) {
    throw std::invalid_argument("query/key length must equal head_dim");
  }
  const auto qr = apply_rotary(q, rotation_angles(q_index, params));
  const auto kr = apply_rotary(k, rotation_angles(k_index, params));
  double acc = 0.0;
  for (std::size_t i = 0; i < qr.size(); ++i) acc += qr[i] * kr[i];
  return acc;
}

}  // namespace circle_rope
