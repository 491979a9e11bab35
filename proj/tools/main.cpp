// fockbarrier-run: batch runner for the barrier-transmission scenarios.

#include <CLI11.hpp>
#include <cstdlib>
#include <fockbarrier/errors.hpp>
#include <fockbarrier/experiments.hpp>
#include <fockbarrier/parallel.hpp>
#include <fockbarrier/presets.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

namespace fb = fockbarrier;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RunFlags {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  unsigned threads = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("config", flags.config_path, "JSON experiment configuration")->required();
  cmd->add_option("--out", flags.out, "output directory (overrides the config and FOCKBARRIER_OUT)");
  cmd->add_option("--seed", flags.seed, "TWA seed override");
  cmd->add_flag("--strict", flags.strict, "abort on truncation or boundary violations");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
}

std::filesystem::path resolve_output(const RunFlags& flags, const fb::ExperimentConfig& cfg) {
  if (!flags.out.empty()) return flags.out;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  const std::string leaf = cfg.name.empty() ? fb::to_string(cfg.scenario) : cfg.name;
  if (const char* env = std::getenv("FOCKBARRIER_OUT"); env && *env) {
    return std::filesystem::path(env) / leaf;
  }
  return std::filesystem::path("runs") / leaf;
}

int execute(const RunFlags& flags, std::optional<fb::Scenario> required) {
  fb::ExperimentConfig cfg = fb::load_config(flags.config_path);
  if (required && cfg.scenario != *required) {
    throw fb::ConfigError("scenario", "this subcommand needs scenario " + fb::to_string(*required) +
                                          ", got " + fb::to_string(cfg.scenario));
  }
  if (flags.seed) cfg.twa.seed = *flags.seed;
  if (flags.strict) cfg.strict = true;
  cfg.output_dir = resolve_output(flags, cfg);
  fb::set_thread_count(flags.threads);

  const fb::RunResult result = fb::run(cfg);
  const auto& m = result.manifest;
  std::cout << m.scenario << ": " << m.outputs.size() << " files in " << cfg.output_dir.string()
            << " (" << std::fixed << std::setprecision(1) << m.wall_clock_seconds << " s, config " << m.config_hash.substr(0, 12)
            << ")\n";
  for (const auto& note : m.notes) std::cout << "note: " << note << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Displaced-Fock transmission through inverted-oscillator barriers"};
  app.set_version_flag("--version", fb::library_version());
  app.require_subcommand(1);

  RunFlags run_flags, energy_flags, fock_flags;
  auto* run_cmd = app.add_subcommand("run", "run one experiment configuration");
  add_run_flags(run_cmd, run_flags);
  auto* energy_cmd = app.add_subcommand("sweep-energy", "transmission against mean energy");
  add_run_flags(energy_cmd, energy_flags);
  auto* fock_cmd = app.add_subcommand("sweep-fock", "transmission against Fock index");
  add_run_flags(fock_cmd, fock_flags);

  auto* presets_cmd = app.add_subcommand("presets", "shipped configurations");
  presets_cmd->require_subcommand(1);
  auto* list_cmd = presets_cmd->add_subcommand("list", "list preset names");
  auto* emit_cmd = presets_cmd->add_subcommand("emit", "print a preset as JSON");
  std::string emit_name;
  std::string emit_out;
  emit_cmd->add_option("name", emit_name, "preset name")->required();
  emit_cmd->add_option("--out", emit_out, "write to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return execute(run_flags, std::nullopt);
    if (*energy_cmd) return execute(energy_flags, fb::Scenario::EnergySweep);
    if (*fock_cmd) return execute(fock_flags, fb::Scenario::FockSweep);
    if (*list_cmd) {
      for (const auto& p : fb::list_presets()) std::cout << p.name << "\t" << p.summary << '\n';
      return 0;
    }
    if (*emit_cmd) {
      const std::string text = fb::config_to_json(fb::preset(emit_name));
      if (emit_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(emit_out, std::ios::binary);
        out << text;
        if (!out) throw fb::ConfigError("--out", "cannot write " + emit_out);
      }
      return 0;
    }
  } catch (const fb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fb::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fb::UnsupportedError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fb::IntegrationError& e) {
    std::cerr << "numeric error (trajectory " << e.trajectory() << "): " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fb::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fb::TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fb::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
