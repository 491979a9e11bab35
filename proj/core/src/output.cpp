#include "fockbarrier/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fockbarrier/errors.hpp"

namespace fockbarrier {

namespace fs = std::filesystem;

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  char pair[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(pair, sizeof pair, "%02x", digest[i]);
    hex += pair;
  }
  return hex;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw UsageError("CSV row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["scenario"] = m.scenario;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["wall_clock_seconds"] = m.wall_clock_seconds;
  auto outputs = nlohmann::ordered_json::array();
  for (const auto& o : m.outputs) {
    outputs.push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  }
  j["outputs"] = outputs;
  auto trunc = nlohmann::ordered_json::array();
  for (const auto& t : m.truncation) {
    trunc.push_back({{"label", t.label},
                     {"n_max", t.n_max},
                     {"max_tail_mass", t.max_tail_mass},
                     {"max_boundary_amplitude", t.max_boundary_amplitude},
                     {"trusted_until", t.trusted_until},
                     {"adequate", t.adequate}});
  }
  j["truncation"] = trunc;
  j["notes"] = m.notes;
  return j.dump(2) + "\n";
}

OutputSink::OutputSink(fs::path directory) : dir_(std::move(directory)) {
  if (dir_.empty()) throw ConfigError("output", "no output directory given");
  std::error_code ec;
  if (fs::exists(dir_)) {
    if (!fs::is_directory(dir_)) throw ConfigError("output", dir_.string() + " is not a directory");
    const fs::path old_manifest = dir_ / "manifest.json";
    std::vector<fs::path> owned;
    if (fs::exists(old_manifest)) {
      std::ifstream in(old_manifest);
      try {
        const auto j = nlohmann::json::parse(in);
        for (const auto& o : j.at("outputs")) owned.push_back(dir_ / o.at("file").get<std::string>());
      } catch (const nlohmann::json::exception&) {
        throw ConfigError("output", old_manifest.string() + " is unreadable; clear the directory");
      }
      owned.push_back(old_manifest);
    }
    for (const auto& entry : fs::recursive_directory_iterator(dir_)) {
      if (!entry.is_regular_file()) continue;
      if (std::find(owned.begin(), owned.end(), entry.path()) == owned.end()) {
        throw ConfigError("output", dir_.string() + " holds files from elsewhere (" +
                                        entry.path().filename().string() + ")");
      }
    }
    for (const auto& p : owned) fs::remove(p, ec);
  }
  fs::create_directories(dir_, ec);
  if (ec) throw ConfigError("output", "cannot create " + dir_.string() + ": " + ec.message());
}

void OutputSink::write(const std::string& name, const std::string& contents) {
  const fs::path path = dir_ / name;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.close();
  if (!out) throw UsageError("failed writing " + path.string());
  records_.push_back(OutputRecord{name, sha256_hex(contents), contents.size()});
}

void OutputSink::finish(RunManifest manifest) {
  manifest.outputs = records_;
  const std::string text = manifest_to_json(manifest);
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw UsageError("failed writing manifest.json");
}

}  // namespace fockbarrier
