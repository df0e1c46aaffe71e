#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sumsetlab/cli_reports.hpp"
#include "sumsetlab/error.hpp"

namespace sumset {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw DomainError("CSV row has " + std::to_string(row.size()) + " fields, header has " + std::to_string(header.size()));
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  if (header.empty()) throw DomainError("CSV needs a header row");
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_field(fields[i]);
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed precision keeps the bytes stable and the file small.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#7f7f7f"};

}  // namespace

std::string render_svg_plot(const std::vector<Series>& series, const PlotStyle& style) {
  if (series.empty()) throw DomainError("plot needs at least one series");
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  auto tx = [&](double x) { return style.log_x ? std::log10(x) : x; };
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y) || (style.log_x && x <= 0)) continue;
      x0 = std::min(x0, tx(x)), x1 = std::max(x1, tx(x));
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!(x0 <= x1)) throw DomainError("plot has no finite points");
  if (x0 == x1) x0 -= 0.5, x1 += 0.5;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;

  const double W = 640, H = 400, L = 70, R = 160, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto mx = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * pw; };
  auto my = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\" "
       "font-family=\"sans-serif\" font-size=\"11\">\n";
  o += "<!-- sumsetlab plot style 1 -->\n";
  o += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  o += "<text x=\"" + px(L + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(style.title) +
       "</text>\n";
  o += "<rect x=\"" + px(L) + "\" y=\"" + px(T) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
    const double sx = L + pw * i / 4, sy = T + ph - ph * i / 4;
    o += "<line x1=\"" + px(sx) + "\" y1=\"" + px(T + ph) + "\" x2=\"" + px(sx) + "\" y2=\"" + px(T + ph + 5) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + px(sx) + "\" y=\"" + px(T + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(style.log_x ? std::pow(10.0, fx) : fx) + "</text>\n";
    o += "<line x1=\"" + px(L - 5) + "\" y1=\"" + px(sy) + "\" x2=\"" + px(L) + "\" y2=\"" + px(sy) +
         "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + px(L - 8) + "\" y=\"" + px(sy + 4) + "\" text-anchor=\"end\">" + tick_label(fy) + "</text>\n";
  }
  o += "<text x=\"" + px(L + pw / 2) + "\" y=\"" + px(H - 10) + "\" text-anchor=\"middle\">" +
       xml_escape(style.x_label + (style.log_x ? " (log)" : "")) + "</text>\n";
  o += "<text x=\"16\" y=\"" + px(T + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + px(T + ph / 2) +
       ")\">" + xml_escape(style.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto* color = kPalette[k % std::size(kPalette)];
    std::vector<std::pair<double, double>> pts;
    for (auto [x, y] : series[k].points)
      if (std::isfinite(x) && std::isfinite(y) && !(style.log_x && x <= 0)) pts.emplace_back(mx(x), my(y));
    if (style.kind == PlotStyle::Kind::line && pts.size() > 1) {
      o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) o += (i ? " " : "") + px(pts[i].first) + "," + px(pts[i].second);
      o += "\"/>\n";
    } else {
      for (auto [x, y] : pts) o += "<circle cx=\"" + px(x) + "\" cy=\"" + px(y) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
    }
    const double ly = T + 10 + 18 * static_cast<double>(k);
    o += "<rect x=\"" + px(L + pw + 12) + "\" y=\"" + px(ly - 8) + "\" width=\"12\" height=\"10\" fill=\"" + color + "\"/>\n";
    o += "<text x=\"" + px(L + pw + 30) + "\" y=\"" + px(ly + 1) + "\">" + xml_escape(series[k].label) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

void emit_svg_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path) {
  write_text_file(path, render_svg_plot(series, style));
}

// ---------------------------------------------------------------------------
// configs and reports

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{{"command", command}, {"params", params}, {"outputs", outputs}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [k, v] : j.items())
    if (k != "command" && k != "params" && k != "outputs") throw DomainError("unknown config key '" + k + "'");
  if (j.contains("command")) c.command = j.at("command").get<std::string>();
  auto read_map = [](const nlohmann::json& m, const char* what) {
    std::map<std::string, std::string> out;
    if (!m.is_object()) throw DomainError(std::string(what) + " must be an object");
    // numbers and booleans are accepted and kept in their JSON spelling
    for (const auto& [k, v] : m.items()) out[k] = v.is_string() ? v.get<std::string>() : v.dump();
    return out;
  };
  if (j.contains("params")) c.params = read_map(j.at("params"), "params");
  if (j.contains("outputs")) c.outputs = read_map(j.at("outputs"), "outputs");
  return c;
}

std::string ExperimentConfig::text() const { return to_json().dump(2); }

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad config: ") + e.what());
  }
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size(); ++i) row[table.header[i]] = r[i];
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"config", config.to_json()},
                        {"columns", table.header},
                        {"rows", std::move(rows)},
                        {"certificates", certificates},
                        {"version", kLibraryVersion},
                        {"seed", seed}};
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw Error("write to " + path + " failed");
}

std::vector<std::string> write_artifacts(const RunReport& report) {
  std::vector<std::string> written;
  if (auto it = report.config.outputs.find("csv"); it != report.config.outputs.end()) {
    write_text_file(it->second, report.table.str());
    written.push_back(it->second);
  }
  if (auto it = report.config.outputs.find("json"); it != report.config.outputs.end()) {
    write_text_file(it->second, report.to_json().dump(2) + "\n");
    written.push_back(it->second);
  }
  return written;
}

}  // namespace sumset
