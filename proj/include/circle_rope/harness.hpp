#pragma once

// Toy attention probe. Each text token gets a random query; every image token
// shares one key vector, so any dispersion in text->image logits is caused by
// positional indices alone.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "circle_rope/metrics.hpp"
#include "circle_rope/rope.hpp"
#include "circle_rope/schemes.hpp"

namespace circle_rope {

enum class Variant { Original, Circle };

enum class ScheduleStrategy { AllCircle, UpperHalfCircle, LowerHalfCircle, Alternating };

class LayerSchedule {
 public:
  explicit LayerSchedule(std::vector<Variant> assignment);

  int num_layers() const { return static_cast<int>(assignment_.size()); }
  /// 1-based layer number.
  Variant variant(int layer) const;
  const std::vector<Variant>& assignment() const { return assignment_; }

 private:
  std::vector<Variant> assignment_;
};

/// Alternating: odd layers Original, even layers Circle. Upper/Lower split
/// after ceil(num_layers / 2) layers.
LayerSchedule make_schedule(int num_layers, ScheduleStrategy strategy);

std::string_view variant_name(Variant v);
std::string_view strategy_name(ScheduleStrategy s);
ScheduleStrategy parse_strategy(std::string_view name);

struct QueryStats {
  double mean = 0.0;
  double std = 0.0;
  double spread = 0.0;  // max - min over image keys
};

struct LayerStats {
  int layer = 0;
  Variant variant = Variant::Original;
  double mean = 0.0;    // mean of per-query means
  double std = 0.0;     // mean of per-query standard deviations
  double spread = 0.0;  // max of per-query spreads
  double ptd = 0.0;
  DistanceConvention convention = DistanceConvention::Euclidean;
  std::vector<QueryStats> queries;
};

struct SchemeReport {
  SchemeKind scheme;
  std::vector<LayerStats> layers;
};

struct Experiment {
  std::vector<Segment> layout;
  std::vector<SchemeKind> schemes;
  CipConfig config;
  LayerSchedule schedule{{Variant::Original, Variant::Circle}};
  RotaryParams params;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  Experiment experiment;
  std::vector<SchemeReport> schemes;
};

/// Index assignment actually used by `scheme` at a layer of the given
/// variant. Only the circle scheme is affected; its Original variant is the
/// spatial M-RoPE index.
IndexedSequence layer_indices(SchemeKind scheme, Variant variant,
                              std::span<const Segment> layout, const CipConfig& config);

/// Row-major text x image logits. Parallel over queries.
std::vector<double> text_image_logits(std::span<const HeadVector> queries,
                                      std::span<const IndexPoint> query_indices,
                                      std::span<const double> key,
                                      std::span<const IndexPoint> key_indices,
                                      const RotaryParams& params);

/// Reference: one logit() call per (query, key) pair.
std::vector<double> text_image_logits_serial(std::span<const HeadVector> queries,
                                             std::span<const IndexPoint> query_indices,
                                             std::span<const double> key,
                                             std::span<const IndexPoint> key_indices,
                                             const RotaryParams& params);

QueryStats summarize(std::span<const double> logits);

ExperimentReport run_experiment(const Experiment& experiment);

/// JSON: scheme -> layer -> {variant, mean, std, spread, ptd, queries}.
std::string report_to_json(const ExperimentReport& report, int indent = 2);

}  // namespace circle_rope
