#include "circle_rope/schemes.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace circle_rope {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

IndexPoint replicated(long long s) {
  const double v = static_cast<double>(s);
  return {v, v, v};
}

void check_segments(std::span<const Segment> segments) {
  if (segments.empty()) throw std::invalid_argument("layout has no segments");
  for (const auto& seg : segments) {
    if (const auto* text = std::get_if<TextRun>(&seg); text && text->length < 1) {
      throw std::invalid_argument("text run length must be >= 1");
    }
  }
}

// Shared walk for the spatial and circle schemes. `place_image` writes the
// image tokens for an image starting at counter `base`.
template <class PlaceImage>
IndexedSequence assign_offset_scheme(SchemeKind scheme,
                                     std::span<const Segment> segments,
                                     PlaceImage&& place_image) {
  check_segments(segments);
  IndexedSequence seq{scheme, {}};
  long long counter = 0;
  for (int id = 0; id < static_cast<int>(segments.size()); ++id) {
    std::visit(Overloaded{
                   [&](const TextRun& text) {
                     for (int k = 0; k < text.length; ++k) {
                       seq.tokens.push_back({Modality::Text, id, replicated(counter++)});
                     }
                   },
                   [&](const ImageGrid& image) {
                     place_image(seq, id, image.grid, counter);
                     counter += std::max(image.grid.width(), image.grid.height());
                   },
               },
               segments[id]);
  }
  return seq;
}

}  // namespace

std::size_t segment_size(const Segment& segment) {
  return std::visit(
      Overloaded{
          [](const TextRun& t) { return static_cast<std::size_t>(t.length); },
          [](const ImageGrid& g) { return g.grid.count(); },
      },
      segment);
}

std::vector<IndexPoint> IndexedSequence::indices(Modality modality) const {
  std::vector<IndexPoint> out;
  for (const auto& t : tokens) {
    if (t.modality == modality) out.push_back(t.index);
  }
  return out;
}

std::size_t IndexedSequence::count(Modality modality) const {
  return static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(),
      [modality](const Token& t) { return t.modality == modality; }));
}

IndexedSequence assign_hard(std::span<const Segment> segments) {
  check_segments(segments);
  IndexedSequence seq{SchemeKind::Hard, {}};
  long long counter = 0;
  for (int id = 0; id < static_cast<int>(segments.size()); ++id) {
    const auto modality = std::holds_alternative<TextRun>(segments[id])
                              ? Modality::Text
                              : Modality::Image;
    const std::size_t n = segment_size(segments[id]);
    for (std::size_t k = 0; k < n; ++k) {
      seq.tokens.push_back({modality, id, replicated(counter++)});
    }
  }
  return seq;
}

IndexedSequence assign_unordered(std::span<const Segment> segments) {
  check_segments(segments);
  IndexedSequence seq{SchemeKind::Unordered, {}};
  long long counter = 0;
  for (int id = 0; id < static_cast<int>(segments.size()); ++id) {
    std::visit(Overloaded{
                   [&](const TextRun& text) {
                     for (int k = 0; k < text.length; ++k) {
                       seq.tokens.push_back({Modality::Text, id, replicated(counter++)});
                     }
                   },
                   [&](const ImageGrid& image) {
                     const auto shared = replicated(counter++);
                     for (std::size_t k = 0; k < image.grid.count(); ++k) {
                       seq.tokens.push_back({Modality::Image, id, shared});
                     }
                   },
               },
               segments[id]);
  }
  return seq;
}

IndexedSequence assign_spatial(std::span<const Segment> segments) {
  return assign_offset_scheme(
      SchemeKind::Spatial, segments,
      [](IndexedSequence& seq, int id, const GridSpec& grid, long long base) {
        const IndexPoint offset = replicated(base);
        for (const auto& p : grid_coords(grid)) {
          seq.tokens.push_back({Modality::Image, id, offset + p});
        }
      });
}

IndexedSequence assign_circle(std::span<const Segment> segments,
                              const CipConfig& config) {
  config.validate();
  return assign_offset_scheme(
      SchemeKind::Circle, segments,
      [&config](IndexedSequence& seq, int id, const GridSpec& grid, long long base) {
        const auto cip = cip_transform(grid, config);
        const auto fused = dual_frame_fusion(cip.projected, cip.centered, config.beta);
        const IndexPoint anchor = replicated(base);
        for (const auto& p : fused) {
          seq.tokens.push_back({Modality::Image, id, anchor + p});
        }
      });
}

IndexedSequence assign(SchemeKind scheme, std::span<const Segment> segments,
                       const CipConfig& config) {
  switch (scheme) {
    case SchemeKind::Hard:
      return assign_hard(segments);
    case SchemeKind::Unordered:
      return assign_unordered(segments);
    case SchemeKind::Spatial:
      return assign_spatial(segments);
    case SchemeKind::Circle:
      return assign_circle(segments, config);
  }
  throw std::invalid_argument("unknown scheme");
}

namespace {

bool parse_positive(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && out >= 1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

Segment parse_segment(std::string_view raw) {
  const auto item = trim(raw);
  const auto bad = [&]() {
    return LayoutError("malformed layout segment '" + std::string(item) +
                       "' (expected t<N> or i<W>x<H>)");
  };
  if (item.size() < 2) throw bad();
  const auto body = item.substr(1);
  if (item.front() == 't') {
    int n = 0;
    if (!parse_positive(body, n)) throw bad();
    return TextRun{n};
  }
  if (item.front() == 'i') {
    const auto x = body.find('x');
    if (x == std::string_view::npos) throw bad();
    int w = 0;
    int h = 0;
    if (!parse_positive(body.substr(0, x), w) || !parse_positive(body.substr(x + 1), h)) {
      throw bad();
    }
    return ImageGrid{GridSpec(w, h)};
  }
  throw bad();
}

}  // namespace

std::vector<Segment> parse_layout(std::string_view text) {
  std::vector<Segment> out;
  if (trim(text).empty()) throw LayoutError("empty layout");
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(parse_segment(text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_layout(std::span<const Segment> segments) {
  std::string out;
  for (const auto& seg : segments) {
    if (!out.empty()) out += ',';
    std::visit(Overloaded{
                   [&](const TextRun& t) { out += "t" + std::to_string(t.length); },
                   [&](const ImageGrid& g) {
                     out += "i" + std::to_string(g.grid.width()) + "x" +
                            std::to_string(g.grid.height());
                   },
               },
               seg);
  }
  return out;
}

std::string_view scheme_name(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::Hard:
      return "hard";
    case SchemeKind::Unordered:
      return "unordered";
    case SchemeKind::Spatial:
      return "spatial";
    case SchemeKind::Circle:
      return "circle";
  }
  return "?";
}

SchemeKind parse_scheme(std::string_view name) {
  for (auto s : {SchemeKind::Hard, SchemeKind::Unordered, SchemeKind::Spatial,
                 SchemeKind::Circle}) {
    if (scheme_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

}  // namespace circle_rope
