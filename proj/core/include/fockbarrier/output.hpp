#pragma once

// CSV and manifest plumbing. Numbers are written with 17 significant digits,
// dot decimal and LF line ends so reruns are byte-comparable.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fockbarrier {

std::string format_number(double value);
/// Empty string for nullopt.
std::string format_number(const std::optional<double>& value);

/// Hex SHA-256 of a byte string / of a file's contents.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Cells are preformatted strings; the row must match the column count.
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct OutputRecord {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct TruncationRecord {
  std::string label;
  int n_max = 0;
  double max_tail_mass = 0.0;
  double max_boundary_amplitude = 0.0;
  /// Last exact time with tail mass at or below the evolution limit.
  double trusted_until = 0.0;
  bool adequate = true;
};

struct RunManifest {
  std::string name;
  std::string scenario;
  std::string config_hash;
  std::string version;
  double wall_clock_seconds = 0.0;
  std::vector<OutputRecord> outputs;
  std::vector<TruncationRecord> truncation;
  std::vector<std::string> notes;
};

std::string manifest_to_json(const RunManifest& manifest);

/// Writes files into one output directory and records their checksums.
class OutputSink {
 public:
  /// Creates the directory. An existing directory must be empty or hold a
  /// previous run (a manifest.json); files listed by that manifest are
  /// removed. Anything else is refused with a ConfigError.
  explicit OutputSink(std::filesystem::path directory);

  const std::filesystem::path& directory() const noexcept { return dir_; }

  /// Writes `contents` to `name` (relative) and records it.
  void write(const std::string& name, const std::string& contents);

  /// Writes manifest.json (the manifest's outputs are replaced by the
  /// recorded files).
  void finish(RunManifest manifest);

  const std::vector<OutputRecord>& records() const noexcept { return records_; }

 private:
  std::filesystem::path dir_;
  std::vector<OutputRecord> records_;
};

}  // namespace fockbarrier
