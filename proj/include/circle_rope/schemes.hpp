#pragma once

// Per-token positional index assignment for mixed text/image sequences.

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "circle_rope/geometry.hpp"

namespace circle_rope {

struct TextRun {
  int length = 1;
};

struct ImageGrid {
  GridSpec grid;
};

using Segment = std::variant<TextRun, ImageGrid>;

std::size_t segment_size(const Segment& segment);

enum class SchemeKind { Hard, Unordered, Spatial, Circle };

enum class Modality { Text, Image };

struct Token {
  Modality modality;
  int segment_id;
  IndexPoint index;
};

struct IndexedSequence {
  SchemeKind scheme;
  std::vector<Token> tokens;

  std::vector<IndexPoint> indices(Modality modality) const;
  std::size_t count(Modality modality) const;
};

/// Every token numbered 0, 1, 2, ... and replicated on all axes.
IndexedSequence assign_hard(std::span<const Segment> segments);

/// Text advances the counter per token, a whole image advances it by one.
IndexedSequence assign_unordered(std::span<const Segment> segments);

/// M-RoPE style: image at counter b gets (b, b + row, b + col); the counter
/// resumes at b + max(width, height) afterwards.
IndexedSequence assign_spatial(std::span<const Segment> segments);

/// Spatial text indices; each image replaced by its fused circle projection
/// centred on the text-line point (b, b, b).
IndexedSequence assign_circle(std::span<const Segment> segments,
                              const CipConfig& config);

IndexedSequence assign(SchemeKind scheme, std::span<const Segment> segments,
                       const CipConfig& config = {});

/// Malformed layout strings. The message names the offending segment.
class LayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "t<N>" and "i<W>x<H>" segments separated by commas, e.g. "i3x3,t5".
std::vector<Segment> parse_layout(std::string_view text);
std::string format_layout(std::span<const Segment> segments);

std::string_view scheme_name(SchemeKind scheme);
/// Throws std::invalid_argument for unknown names.
SchemeKind parse_scheme(std::string_view name);

}  // namespace circle_rope
