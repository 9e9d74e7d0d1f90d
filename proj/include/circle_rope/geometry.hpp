#pragma once

// Circular image-token index projection: centralization, mixed-angle
// circular mapping, target-plane rotation, and dual-frame fusion.
//
// Working-plane convention: the width index plays the role of x and the
// height index the role of y. Index points keep axis 0 for the temporal
// (sequential) coordinate, axis 1 for height and axis 2 for width.

#include <span>
#include <variant>
#include <vector>

#include "circle_rope/vec3.hpp"

namespace circle_rope {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr std::size_t kTemporalAxis = 0;
inline constexpr std::size_t kHeightAxis = 1;
inline constexpr std::size_t kWidthAxis = 2;

/// Token grid of an image after patching. Both sides are at least 1.
class GridSpec {
 public:
  GridSpec(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int width_;
  int height_;
};

struct FixedRadius {
  double value = 10.0;
};

/// R = scale * max planar norm of the centered grid.
struct AutoRadius {
  double scale = 1.0;
};

using RadiusStrategy = std::variant<FixedRadius, AutoRadius>;

struct CipConfig {
  double alpha = 0.5;                       // weight on the spatial-origin angle
  RadiusStrategy radius = FixedRadius{10.0};
  double beta = 0.1;                        // weight on projected coordinates
  Vec3 text_direction{1.0, 1.0, 1.0};

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Right-handed orthonormal frame {u, v, normal} of the target plane.
struct PlaneBasis {
  Vec3 normal;
  Vec3 u;
  Vec3 v;
};

struct Centered {
  std::vector<IndexPoint> points;
  IndexPoint center;
};

/// Row-major grid indices: (0, row, col), row outer.
std::vector<IndexPoint> grid_coords(const GridSpec& grid);

/// Shift so that the midpoint of the component-wise bounding box is the origin.
Centered centralize(std::span<const IndexPoint> points);

/// Polar angle of (width, height) per point, min-max stretched to [0, 2pi).
/// Every angle is 0 when all points share one polar angle.
std::vector<double> spatial_origin_angles(std::span<const IndexPoint> centered);

/// k / N * 2pi for flattened (row-major) index k.
std::vector<double> grid_index_angles(const GridSpec& grid);

std::vector<double> mix_angles(std::span<const double> spatial,
                               std::span<const double> grid_index,
                               double alpha);

double compute_radius(std::span<const IndexPoint> centered,
                      const RadiusStrategy& strategy);

/// Points (R cos t, R sin t, 0) in the working plane.
std::vector<IndexPoint> map_to_circle(std::span<const double> angles,
                                      double radius);

PlaneBasis build_plane_basis(const Vec3& text_direction);

/// x * u + y * v for each working-plane point (x, y, 0).
std::vector<IndexPoint> rotate_to_plane(std::span<const IndexPoint> circle_points,
                                        const PlaneBasis& basis);

/// Every intermediate of the projection, in grid_coords order.
struct CipStages {
  std::vector<IndexPoint> original;
  Centered centered;
  std::vector<double> spatial_angles;
  std::vector<double> grid_angles;
  std::vector<double> mixed_angles;
  double radius = 0.0;
  std::vector<IndexPoint> circle;  // working plane, z = 0
  PlaneBasis basis;
  std::vector<IndexPoint> projected;
};

CipStages cip_stages(const GridSpec& grid, const CipConfig& config);

struct CipResult {
  std::vector<IndexPoint> projected;
  std::vector<IndexPoint> centered;
};

CipResult cip_transform(const GridSpec& grid, const CipConfig& config);

/// beta * projected + (1 - beta) * centered, component-wise.
std::vector<IndexPoint> dual_frame_fusion(std::span<const IndexPoint> projected,
                                          std::span<const IndexPoint> centered,
                                          double beta);

}  // namespace circle_rope
