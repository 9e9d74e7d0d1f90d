#include "circle_rope/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace circle_rope {

LayerSchedule::LayerSchedule(std::vector<Variant> assignment)
    : assignment_(std::move(assignment)) {
  if (assignment_.empty()) throw std::invalid_argument("schedule needs at least one layer");
}

Variant LayerSchedule::variant(int layer) const {
  if (layer < 1 || layer > num_layers()) {
    throw std::out_of_range("layer " + std::to_string(layer) + " outside schedule");
  }
  return assignment_[static_cast<std::size_t>(layer - 1)];
}

LayerSchedule make_schedule(int num_layers, ScheduleStrategy strategy) {
  if (num_layers < 1) throw std::invalid_argument("num_layers must be >= 1");
  const int lower_count = (num_layers + 1) / 2;
  std::vector<Variant> out(static_cast<std::size_t>(num_layers));
  for (int layer = 1; layer <= num_layers; ++layer) {
    bool circle = false;
    switch (strategy) {
      case ScheduleStrategy::AllCircle:
        circle = true;
        break;
      case ScheduleStrategy::UpperHalfCircle:
        circle = layer > lower_count;
        break;
      case ScheduleStrategy::LowerHalfCircle:
        circle = layer <= lower_count;
        break;
      case ScheduleStrategy::Alternating:
        circle = layer % 2 == 0;
        break;
    }
    out[static_cast<std::size_t>(layer - 1)] = circle ? Variant::Circle : Variant::Original;
  }
  return LayerSchedule(std::move(out));
}

std::string_view variant_name(Variant v) {
  return v == Variant::Circle ? "circle" : "original";
}

std::string_view strategy_name(ScheduleStrategy s) {
  switch (s) {
    case ScheduleStrategy::AllCircle:
      return "all";
    case ScheduleStrategy::UpperHalfCircle:
      return "upper";
    case ScheduleStrategy::LowerHalfCircle:
      return "lower";
    case ScheduleStrategy::Alternating:
      return "alt";
  }
  return "?";
}

ScheduleStrategy parse_strategy(std::string_view name) {
  for (auto s : {ScheduleStrategy::AllCircle, ScheduleStrategy::UpperHalfCircle,
                 ScheduleStrategy::LowerHalfCircle, ScheduleStrategy::Alternating}) {
    if (strategy_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown schedule '" + std::string(name) + "'");
}

IndexedSequence layer_indices(SchemeKind scheme, Variant variant,
                              std::span<const Segment> layout, const CipConfig& config) {
  if (scheme == SchemeKind::Circle && variant == Variant::Original) {
    return assign_spatial(layout);
  }
  return assign(scheme, layout, config);
}

namespace {

void check_logit_inputs(std::span<const HeadVector> queries,
                        std::span<const IndexPoint> query_indices,
                        std::span<const double> key, const RotaryParams& params) {
  params.validate();
  if (queries.size() != query_indices.size()) {
    throw std::invalid_argument("one index per query required");
  }
  const auto dim = static_cast<std::size_t>(params.head_dim);
  if (key.size() != dim) throw std::invalid_argument("key length must equal head_dim");
  for (const auto& q : queries) {
    if (q.size() != dim) throw std::invalid_argument("query length must equal head_dim");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace

std::vector<double> text_image_logits(std::span<const HeadVector> queries,
                                      std::span<const IndexPoint> query_indices,
                                      std::span<const double> key,
                                      std::span<const IndexPoint> key_indices,
                                      const RotaryParams& params) {
  check_logit_inputs(queries, query_indices, key, params);
  const std::size_t nq = queries.size();
  const std::size_t nk = key_indices.size();
  const auto nq_ll = static_cast<long long>(nq);
  const auto nk_ll = static_cast<long long>(nk);

  std::vector<HeadVector> rotated_keys(nk);
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < nk_ll; ++c) {
    rotated_keys[c] = apply_rotary(key, rotation_angles(key_indices[c], params));
  }

  std::vector<double> out(nq * nk);
#pragma omp parallel for schedule(static)
  for (long long r = 0; r < nq_ll; ++r) {
    const auto rq = apply_rotary(queries[r], rotation_angles(query_indices[r], params));
    for (std::size_t c = 0; c < nk; ++c) {
      out[static_cast<std::size_t>(r) * nk + c] = dot(rq, rotated_keys[c]);
    }
  }
  return out;
}

std::vector<double> text_image_logits_serial(std::span<const HeadVector> queries,
                                             std::span<const IndexPoint> query_indices,
                                             std::span<const double> key,
                                             std::span<const IndexPoint> key_indices,
                                             const RotaryParams& params) {
  check_logit_inputs(queries, query_indices, key, params);
  std::vector<double> out;
  out.reserve(queries.size() * key_indices.size());
  for (std::size_t r = 0; r < queries.size(); ++r) {
    for (const auto& ki : key_indices) {
      out.push_back(logit(queries[r], query_indices[r], key, ki, params));
    }
  }
  return out;
}

QueryStats summarize(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("no logits to summarize");
  QueryStats s;
  double sum = 0.0;
  for (double x : logits) sum += x;
  s.mean = sum / static_cast<double>(logits.size());
  double sq = 0.0;
  for (double x : logits) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(logits.size()));
  const auto [lo, hi] = std::minmax_element(logits.begin(), logits.end());
  s.spread = *hi - *lo;
  return s;
}

ExperimentReport run_experiment(const Experiment& experiment) {
  experiment.params.validate();
  experiment.config.validate();

  // Vectors are drawn once so every scheme and layer sees the same content.
  std::mt19937_64 rng(experiment.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = static_cast<std::size_t>(experiment.params.head_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const auto draw = [&]() {
    HeadVector v(dim);
    for (auto& x : v) x = normal(rng) * scale;
    return v;
  };

  std::size_t n_text = 0;
  std::size_t n_image = 0;
  for (const auto& seg : experiment.layout) {
    (std::holds_alternative<TextRun>(seg) ? n_text : n_image) += segment_size(seg);
  }
  if (n_text == 0 || n_image == 0) {
    throw std::invalid_argument("PTD requires both modalities");
  }
  std::vector<HeadVector> queries;
  queries.reserve(n_text);
  for (std::size_t i = 0; i < n_text; ++i) queries.push_back(draw());
  const HeadVector key = draw();

  ExperimentReport report{experiment, {}};
  for (SchemeKind scheme : experiment.schemes) {
    SchemeReport sr{scheme, {}};
    for (int layer = 1; layer <= experiment.schedule.num_layers(); ++layer) {
      const Variant variant = experiment.schedule.variant(layer);
      const auto seq = layer_indices(scheme, variant, experiment.layout, experiment.config);
      const auto q_idx = seq.indices(Modality::Text);
      const auto k_idx = seq.indices(Modality::Image);
      const auto logits = text_image_logits(queries, q_idx, key, k_idx, experiment.params);

      LayerStats ls;
      ls.layer = layer;
      ls.variant = variant;
      ls.convention = convention_for(seq.scheme);
      ls.ptd = ptd(distance_matrix(seq, ls.convention));
      const std::size_t nk = k_idx.size();
      for (std::size_t r = 0; r < q_idx.size(); ++r) {
        ls.queries.push_back(summarize(std::span(logits).subspan(r * nk, nk)));
      }
      for (const auto& q : ls.queries) {
        ls.mean += q.mean;
        ls.std += q.std;
        ls.spread = std::max(ls.spread, q.spread);
      }
      ls.mean /= static_cast<double>(ls.queries.size());
      ls.std /= static_cast<double>(ls.queries.size());
      sr.layers.push_back(std::move(ls));
    }
    report.schemes.push_back(std::move(sr));
  }
  return report;
}

std::string report_to_json(const ExperimentReport& report, int indent) {
  using nlohmann::ordered_json;
  const auto& ex = report.experiment;

  ordered_json radius;
  if (const auto* f = std::get_if<FixedRadius>(&ex.config.radius)) {
    radius = {{"strategy", "fixed"}, {"value", f->value}};
  } else {
    radius = {{"strategy", "auto"}, {"k", std::get<AutoRadius>(ex.config.radius).scale}};
  }

  ordered_json doc;
  doc["layout"] = format_layout(ex.layout);
  doc["seed"] = ex.seed;
  doc["protocol"] = "one standard-normal query per text token, one shared key for all "
                    "image tokens, entries scaled by 1/sqrt(head_dim)";
  doc["rotary"] = {{"head_dim", ex.params.head_dim},
                   {"base", ex.params.base},
                   {"sections", ex.params.sections}};
  doc["cip"] = {{"alpha", ex.config.alpha},
                {"radius", radius},
                {"beta", ex.config.beta},
                {"text_direction", ex.config.text_direction.c}};
  ordered_json schedule = ordered_json::array();
  for (auto v : ex.schedule.assignment()) schedule.push_back(variant_name(v));
  doc["schedule"] = schedule;

  ordered_json schemes = ordered_json::object();
  for (const auto& sr : report.schemes) {
    ordered_json layers = ordered_json::object();
    for (const auto& ls : sr.layers) {
      ordered_json queries = ordered_json::array();
      for (const auto& q : ls.queries) {
        queries.push_back({{"mean", q.mean}, {"std", q.std}, {"spread", q.spread}});
      }
      layers[std::to_string(ls.layer)] = {{"variant", variant_name(ls.variant)},
                                          {"mean", ls.mean},
                                          {"std", ls.std},
                                          {"spread", ls.spread},
                                          {"ptd", ls.ptd},
                                          {"ptd_convention", convention_name(ls.convention)},
                                          {"queries", queries}};
    }
    schemes[std::string(scheme_name(sr.scheme))] = std::move(layers);
  }
  doc["schemes"] = std::move(schemes);
  return doc.dump(indent);
}

}  // namespace circle_rope
