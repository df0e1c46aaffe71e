#pragma once

// Report artifacts (CSV, JSON, SVG), experiment configs and the command-line entry point.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sumset {

inline constexpr const char* kLibraryVersion = "0.4.0";

/// Shortest text that reads back to the same double.
std::string format_double(double v);

/// RFC 4180: CRLF line ends, fields quoted when they hold ',', '"', CR or LF.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};
std::string csv_field(std::string_view s);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct PlotStyle {
  enum class Kind { line, scatter };
  Kind kind = Kind::line;
  std::string title, x_label, y_label;
  bool log_x = false;
};

/// Self-contained SVG with axes, labels and a legend. Identical input gives identical bytes.
/// Throws DomainError when there is no series or no finite point.
std::string render_svg_plot(const std::vector<Series>& series, const PlotStyle& style);
void emit_svg_plot(const std::vector<Series>& series, const PlotStyle& style, const std::string& path);

/// A subcommand with its flags, every default filled in.
struct ExperimentConfig {
  std::string command;                        // "group kneser", "means weyl", ...
  std::map<std::string, std::string> params;  // flag name -> literal
  std::map<std::string, std::string> outputs; // "csv" | "json" | "svg" -> path

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  std::string text() const;
  static ExperimentConfig parse(std::string_view text);
  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct RunReport {
  ExperimentConfig config;
  CsvTable table;
  nlohmann::json certificates = nlohmann::json::object();
  std::uint64_t seed = 0;
  double wall_seconds = 0;  // logged, never written into artifacts

  /// Config echo, rows, certificates, version and seed; no timing.
  nlohmann::json to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);

/// Writes the configured outputs; returns the paths written.
std::vector<std::string> write_artifacts(const RunReport& report);

/// Exit codes of the command line.
enum ExitCode : int { kOk = 0, kFailure = 1, kValidation = 2, kCapacity = 3, kUsage = 64 };

int run_command(int argc, char** argv);

}  // namespace sumset
