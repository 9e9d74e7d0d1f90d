#include "cli.hpp"

#include <charconv>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "circle_rope/geometry.hpp"
#include "circle_rope/harness.hpp"
#include "circle_rope/metrics.hpp"
#include "circle_rope/rope.hpp"
#include "circle_rope/schemes.hpp"
#include "json.hpp"

namespace circle_rope::cli {

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 15);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return {buf, ptr};
}

namespace {

enum class Format { Csv, Json, Table };

struct Options {
  std::string layout;
  std::string schemes = "hard,unordered,spatial,circle";
  double alpha = 0.5;
  std::string radius = "fixed:10";
  std::optional<double> beta;
  std::string text_direction = "1,1,1";
  std::string stage = "projected";
  std::string schedule = "alt";
  int layers = 36;
  std::uint64_t seed = 0;
  int head_dim = 64;
  std::optional<std::string> sections;
  double base = 10000.0;
  std::optional<std::string> format;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("invalid " + what + " '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("invalid " + what + " '" + s + "'");
  }
  return v;
}

RadiusStrategy parse_radius(const std::string& s) {
  if (s.rfind("fixed:", 0) == 0) return FixedRadius{parse_double(s.substr(6), "radius")};
  if (s.rfind("auto:", 0) == 0) return AutoRadius{parse_double(s.substr(5), "radius")};
  return FixedRadius{parse_double(s, "radius")};
}

Format parse_format(const std::optional<std::string>& s, Format fallback) {
  if (!s) return fallback;
  if (*s == "csv") return Format::Csv;
  if (*s == "json") return Format::Json;
  if (*s == "table") return Format::Table;
  throw std::invalid_argument("unknown format '" + *s + "' (csv|json|table)");
}

CipConfig make_config(const Options& o, double default_beta) {
  CipConfig c;
  c.alpha = o.alpha;
  c.radius = parse_radius(o.radius);
  c.beta = o.beta.value_or(default_beta);
  const auto parts = split(o.text_direction, ',');
  if (parts.size() != 3) throw std::invalid_argument("--text-direction needs x,y,z");
  for (std::size_t i = 0; i < 3; ++i) c.text_direction[i] = parse_double(parts[i], "text direction");
  c.validate();
  return c;
}

RotaryParams make_params(const Options& o) {
  RotaryParams p;
  p.head_dim = o.head_dim;
  p.base = o.base;
  if (o.sections) {
    const auto parts = split(*o.sections, ',');
    if (parts.size() != 3) throw std::invalid_argument("--sections needs a,b,c");
    for (std::size_t i = 0; i < 3; ++i) p.sections[i] = parse_int(parts[i], "section");
  } else {
    const int pairs = o.head_dim / 2;
    p.sections[0] = pairs / 2;
    p.sections[1] = (pairs - p.sections[0]) / 2;
    p.sections[2] = pairs - p.sections[0] - p.sections[1];
  }
  p.validate();
  return p;
}

std::vector<SchemeKind> parse_schemes(const std::string& s) {
  std::vector<SchemeKind> out;
  for (const auto& name : split(s, ',')) out.push_back(parse_scheme(name));
  if (out.empty()) throw std::invalid_argument("no schemes given");
  return out;
}

std::vector<Segment> require_layout(const Options& o) {
  if (o.layout.empty()) throw std::invalid_argument("--layout is required");
  return parse_layout(o.layout);
}

// Column-aligned plain text table.
void print_table(std::ostream& out, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      out << (c + 1 == r.size() ? "\n" : "  ");
    }
  };
  line(header);
  for (const auto& r : rows) line(r);
}

void print_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

constexpr const char* kOffsetNote =
    "text indices (t,t,t) from a running counter; an image starting at counter b "
    "occupies (b, b+row, b+col) and the counter resumes at b+max(w,h)";

int cmd_ptd(const Options& o, std::ostream& out) {
  const auto layout = require_layout(o);
  const auto config = make_config(o, 1.0);
  const auto format = parse_format(o.format, Format::Table);

  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
  for (SchemeKind scheme : parse_schemes(o.schemes)) {
    const auto seq = assign(scheme, layout, config);
    const auto convention = convention_for(scheme);
    const double value = ptd(distance_matrix(seq, convention));
    rows.push_back({std::string(scheme_name(scheme)), format_number(value),
                    std::string(convention_name(convention))});
    json_rows.push_back({{"scheme", scheme_name(scheme)},
                         {"ptd", value},
                         {"convention", convention_name(convention)}});
  }

  const std::vector<std::string> header{"scheme", "ptd", "convention"};
  switch (format) {
    case Format::Csv:
      print_csv(out, header, rows);
      break;
    case Format::Json: {
      nlohmann::ordered_json doc;
      doc["layout"] = format_layout(layout);
      doc["offset_rule"] = kOffsetNote;
      doc["beta"] = config.beta;
      doc["rows"] = json_rows;
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Table:
      out << "layout: " << format_layout(layout) << "\n";
      out << "offsets: " << kOffsetNote << "\n";
      out << "circle beta: " << format_number(config.beta) << "\n\n";
      print_table(out, header, rows);
      break;
  }
  return kExitOk;
}

int cmd_project(const Options& o, std::ostream& out) {
  const auto layout = require_layout(o);
  const auto config = make_config(o, 0.1);
  const auto format = parse_format(o.format, Format::Csv);
  const std::string& stage = o.stage;
  if (stage != "centered" && stage != "circle2d" && stage != "projected" && stage != "fused") {
    throw std::invalid_argument("unknown stage '" + stage +
                                "' (centered|circle2d|projected|fused)");
  }

  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
  std::size_t token = 0;
  for (const auto& seg : layout) {
    const auto* image = std::get_if<ImageGrid>(&seg);
    if (!image) {
      token += segment_size(seg);
      continue;
    }
    const auto s = cip_stages(image->grid, config);
    std::vector<IndexPoint> pts;
    if (stage == "centered") {
      pts = s.centered.points;
    } else if (stage == "circle2d") {
      pts = s.circle;
    } else if (stage == "projected") {
      pts = s.projected;
    } else {
      pts = dual_frame_fusion(s.projected, s.centered.points, config.beta);
    }
    for (const auto& p : pts) {
      rows.push_back({std::to_string(token), format_number(p[0]), format_number(p[1]),
                      format_number(p[2])});
      json_rows.push_back({{"token_id", token}, {"x", p[0]}, {"y", p[1]}, {"z", p[2]}});
      ++token;
    }
  }

  const std::vector<std::string> header{"token_id", "x", "y", "z"};
  switch (format) {
    case Format::Csv:
      print_csv(out, header, rows);
      break;
    case Format::Json:
      out << json_rows.dump(2) << '\n';
      break;
    case Format::Table:
      print_table(out, header, rows);
      break;
  }
  return kExitOk;
}

int cmd_attn(const Options& o, std::ostream& out) {
  Experiment ex;
  ex.layout = require_layout(o);
  ex.config = make_config(o, 0.1);
  ex.params = make_params(o);
  ex.schemes = parse_schemes(o.schemes);
  ex.schedule = make_schedule(o.layers, parse_strategy(o.schedule));
  ex.seed = o.seed;
  const auto format = parse_format(o.format, Format::Json);
  const auto report = run_experiment(ex);

  if (format == Format::Json) {
    out << report_to_json(report) << '\n';
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& sr : report.schemes) {
    for (const auto& ls : sr.layers) {
      rows.push_back({std::string(scheme_name(sr.scheme)), std::to_string(ls.layer),
                      std::string(variant_name(ls.variant)), format_number(ls.mean),
                      format_number(ls.std), format_number(ls.spread),
                      format_number(ls.ptd)});
    }
  }
  const std::vector<std::string> header{"scheme", "layer", "variant", "mean",
                                        "std",    "spread", "ptd"};
  if (format == Format::Csv) {
    print_csv(out, header, rows);
  } else {
    print_table(out, header, rows);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circle-RoPE index projection, PTD metric and rotary attention probe",
               "circle-rope"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file (flags override)");

  Options o;
  app.add_option("--layout", o.layout, "segments t<N> / i<W>x<H>, comma separated");
  app.add_option("--schemes,--scheme", o.schemes, "hard,unordered,spatial,circle");
  app.add_option("--alpha", o.alpha, "angle-mix weight on the spatial-origin angle");
  app.add_option("--radius", o.radius, "fixed:<R> | auto:<k> | <R>");
  app.add_option("--beta", o.beta, "fusion weight on projected coordinates");
  app.add_option("--text-direction", o.text_direction, "circle normal x,y,z");
  app.add_option("--stage", o.stage, "centered|circle2d|projected|fused");
  app.add_option("--schedule", o.schedule, "all|upper|lower|alt");
  app.add_option("--layers", o.layers, "number of layers");
  app.add_option("--seed", o.seed, "random seed")->envname("CIRCLE_ROPE_SEED");
  app.add_option("--head-dim", o.head_dim, "rotary head dimension");
  app.add_option("--sections", o.sections, "frequency pairs per axis a,b,c");
  app.add_option("--base", o.base, "rotary frequency base");
  app.add_option("--format", o.format, "csv|json|table");

  auto* ptd_cmd = app.add_subcommand("ptd", "Per-Token Distance for each scheme");
  auto* project_cmd = app.add_subcommand("project", "dump one projection stage");
  auto* attn_cmd = app.add_subcommand("attn", "rotary attention dispersion probe");
  for (auto* sub : {ptd_cmd, project_cmd, attn_cmd}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (ptd_cmd->parsed()) return cmd_ptd(o, out);
    if (project_cmd->parsed()) return cmd_project(o, out);
    return cmd_attn(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace circle_rope::cli
