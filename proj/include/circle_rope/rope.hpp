#pragma once

// Multi-axis rotary embedding over real-valued 3D indices.
//
// Frequency pairs are split into three contiguous sections, one per index
// axis. Within a section the ladder restarts: the d-th pair of any section
// rotates by coord * base^(-2d / head_dim).

#include <array>
#include <span>
#include <vector>

#include "circle_rope/vec3.hpp"

namespace circle_rope {

struct RotaryParams {
  int head_dim = 64;
  double base = 10000.0;
  std::array<int, 3> sections{16, 8, 8};

  /// Throws std::invalid_argument unless head_dim is even and positive,
  /// base is positive and the sections sum to head_dim / 2.
  void validate() const;
  int pairs() const { return head_dim / 2; }
};

using HeadVector = std::vector<double>;

/// Per-pair inverse frequency together with the axis that drives it.
struct PairFrequency {
  std::size_t axis;
  double inv_freq;
};

std::vector<PairFrequency> pair_frequencies(const RotaryParams& params);

std::vector<double> rotation_angles(const IndexPoint& index, const RotaryParams& params);

/// Rotates each pair (x[2j], x[2j+1]) by angles[j].
HeadVector apply_rotary(std::span<const double> vec, std::span<const double> angles);

double logit(std::span<const double> q, const IndexPoint& q_index,
             std::span<const double> k, const IndexPoint& k_index,
             const RotaryParams& params);

}  // namespace circle_rope
