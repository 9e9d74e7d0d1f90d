#include "circle_rope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace circle_rope {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

GridSpec::GridSpec(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid width and height must be >= 1");
  }
}

void CipConfig::validate() const {
  require_unit_interval(alpha, "alpha");
  require_unit_interval(beta, "beta");
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, FixedRadius>) {
          if (!(r.value > 0.0) || !std::isfinite(r.value)) {
            throw std::invalid_argument("fixed radius must be positive");
          }
        } else {
          if (!(r.scale > 0.0) || !std::isfinite(r.scale)) {
            throw std::invalid_argument("auto radius scale must be positive");
          }
        }
      },
      radius);
  if (!is_finite(text_direction) || norm(text_direction) == 0.0) {
    throw std::invalid_argument("text direction must be a finite nonzero vector");
  }
}

std::vector<IndexPoint> grid_coords(const GridSpec& grid) {
  std::vector<IndexPoint> out;
  out.reserve(grid.count());
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      out.emplace_back(0.0, static_cast<double>(row), static_cast<double>(col));
    }
  }
  return out;
}

Centered centralize(std::span<const IndexPoint> points) {
  if (points.empty()) throw std::invalid_argument("empty point set");

  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const auto& p : points) {
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  Centered out;
  out.center = 0.5 * (hi + lo);
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(p - out.center);
  return out;
}

std::vector<double> spatial_origin_angles(std::span<const IndexPoint> centered) {
  std::vector<double> raw;
  raw.reserve(centered.size());
  for (const auto& p : centered) {
    // +0.0 folds a signed zero so atan2 stays in (-pi, pi]; atan2(0, 0) = 0.
    raw.push_back(std::atan2(p[kHeightAxis] + 0.0, p[kWidthAxis] + 0.0));
  }
  if (raw.empty()) return raw;

  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  for (double& theta : raw) {
    if (range > 0.0) {
      theta = (theta - lo) / range * kTwoPi;
      // The maximum lands on exactly 2pi, which is the same direction as 0.
      if (theta >= kTwoPi) theta -= kTwoPi;
    } else {
      theta = 0.0;
    }
  }
  return raw;
}

std::vector<double> grid_index_angles(const GridSpec& grid) {
  const std::size_t n = grid.count();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
  }
  return out;
}

std::vector<double> mix_angles(std::span<const double> spatial,
                               std::span<const double> grid_index,
                               double alpha) {
  if (spatial.size() != grid_index.size()) {
    throw std::invalid_argument("angle lists differ in length");
  }
  require_unit_interval(alpha, "alpha");
  std::vector<double> out(spatial.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = alpha * spatial[k] + (1.0 - alpha) * grid_index[k];
  }
  return out;
}

double compute_radius(std::span<const IndexPoint> centered,
                      const RadiusStrategy& strategy) {
  if (const auto* fixed = std::get_if<FixedRadius>(&strategy)) {
    if (!(fixed->value > 0.0)) throw std::invalid_argument("degenerate radius");
    return fixed->value;
  }
  const auto& scaled = std::get<AutoRadius>(strategy);
  double max_norm = 0.0;
  for (const auto& p : centered) {
    max_norm = std::max(max_norm, std::hypot(p[kHeightAxis], p[kWidthAxis]));
  }
  const double r = scaled.scale * max_norm;
  if (!(r > 0.0)) throw std::invalid_argument("degenerate radius");
  return r;
}

std::vector<IndexPoint> map_to_circle(std::span<const double> angles,
                                      double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("degenerate radius");
  std::vector<IndexPoint> out;
  out.reserve(angles.size());
  for (double theta : angles) {
    out.emplace_back(radius * std::cos(theta), radius * std::sin(theta), 0.0);
  }
  return out;
}

PlaneBasis build_plane_basis(const Vec3& text_direction) {
  const double len = norm(text_direction);
  if (!is_finite(text_direction) || len == 0.0) {
    throw std::invalid_argument("text direction must be a finite nonzero vector");
  }
  PlaneBasis basis;
  basis.normal = text_direction * (1.0 / len);
  const Vec3& n = basis.normal;

  const double u_len = std::hypot(n[0], n[1]);
  if (u_len == 0.0) {
    // Normal along the third axis: (-n_y, n_x, 0) vanishes.
    basis.u = Vec3{1.0, 0.0, 0.0};
  } else {
    basis.u = Vec3{-n[1] / u_len, n[0] / u_len, 0.0};
  }
  basis.v = cross(n, basis.u);
  return basis;
}

std::vector<IndexPoint> rotate_to_plane(std::span<const IndexPoint> circle_points,
                                        const PlaneBasis& basis) {
  std::vector<IndexPoint> out;
  out.reserve(circle_points.size());
  for (const auto& p : circle_points) {
    if (p[2] != 0.0) {
      throw std::invalid_argument("circle points must have zero third component");
    }
    out.push_back(p[0] * basis.u + p[1] * basis.v);
  }
  return out;
}

CipStages cip_stages(const GridSpec& grid, const CipConfig& config) {
  config.validate();
  CipStages s;
  s.original = grid_coords(grid);
  s.centered = centralize(s.original);
  s.spatial_angles = spatial_origin_angles(s.centered.points);
  s.grid_angles = grid_index_angles(grid);
  s.mixed_angles = mix_angles(s.spatial_angles, s.grid_angles, config.alpha);
  s.radius = compute_radius(s.centered.points, config.radius);
  s.circle = map_to_circle(s.mixed_angles, s.radius);
  s.basis = build_plane_basis(config.text_direction);
  s.projected = rotate_to_plane(s.circle, s.basis);
  return s;
}

CipResult cip_transform(const GridSpec& grid, const CipConfig& config) {
  auto s = cip_stages(grid, config);
  return {std::move(s.projected), std::move(s.centered.points)};
}

std::vector<IndexPoint> dual_frame_fusion(std::span<const IndexPoint> projected,
                                          std::span<const IndexPoint> centered,
                                          double beta) {
  if (projected.size() != centered.size()) {
    throw std::invalid_argument("point lists differ in length");
  }
  require_unit_interval(beta, "beta");
  std::vector<IndexPoint> out;
  out.reserve(projected.size());
  for (std::size_t k = 0; k < projected.size(); ++k) {
    out.push_back(beta * projected[k] + (1.0 - beta) * centered[k]);
  }
  return out;
}

}  // namespace circle_rope
