#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "slabprobe/error.hpp"
#include "slabprobe/run/commands.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailure = 2;

void print_manifest_summary(const slabprobe::run::RunManifest& manifest, const std::string& dir) {
  std::cout << manifest.command << ": wrote " << manifest.artifacts.size() << " file(s) to " << dir << '\n';
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity reconstruction in a slab by probing with complex spherical waves"};
  app.require_subcommand(1);

  std::string config_path;
  slabprobe::run::CommandOptions options;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<double> t;
  std::optional<double> h;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output.dir)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* forward = app.add_subcommand("forward", "solve with and without the cavity for one (p, t, h)");
  auto* indicator = app.add_subcommand("indicator", "indicator series and classification for one (p, t)");
  auto* sweep = app.add_subcommand("sweep", "distance estimates for all probes, carved envelope");
  auto* validate = app.add_subcommand("validate", "run the property suites");
  for (auto* sub : {forward, indicator, sweep, validate}) add_common(sub);
  for (auto* sub : {forward, indicator}) {
    sub->add_option("--probe", options.probe, "probe index")->check(CLI::NonNegativeNumber);
    sub->add_option("--t", t, "front radius")->required();
  }
  forward->set_help_flag("--help", "print this help message and exit");
  forward->add_option("--h", h, "semiclassical parameter (default: first grid value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInvalid;
  }
  if (out) options.out = *out;
  options.workers = workers;
  options.t = t;
  options.h = h;

  try {
    const auto config = slabprobe::run::apply_options(slabprobe::run::load_config(config_path), options);
    const std::string dir = config.output_dir.string();
    if (forward->parsed()) {
      print_manifest_summary(slabprobe::run::cmd_forward(config, options), dir);
    } else if (indicator->parsed()) {
      print_manifest_summary(slabprobe::run::cmd_indicator(config, options), dir);
    } else if (sweep->parsed()) {
      const auto outcome = slabprobe::run::cmd_sweep(config, options);
      print_manifest_summary(outcome.manifest, dir);
      std::cout << outcome.distances.ok_count() << " of " << outcome.distances.records.size() << " probes OK\n";
      if (outcome.distances.ok_count() == 0) std::cout << "no cavity detected\n";
    } else {
      const auto checks = slabprobe::run::cmd_validate(config);
      slabprobe::run::print_checks(std::cout, checks);
      for (const auto& c : checks) {
        if (!c.pass) return kFailure;
      }
    }
  } catch (const slabprobe::ValidationError& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& issue : e.issues()) std::cerr << "  - " << issue << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
