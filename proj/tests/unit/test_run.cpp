#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slabprobe/error.hpp"
#include "slabprobe/run/commands.hpp"
#include "slabprobe/run/config.hpp"
#include "slabprobe/run/csv.hpp"

using namespace slabprobe;
using namespace slabprobe::run;

namespace {

const char* kMinimal = R"({
  "geometry": { "d1": 0.0, "d2": 1.0 },
  "cavity": { "type": "disc", "center": [0.0, 0.5], "radius": 0.2 },
  "probes": { "points": [[0.0, 1.2]] }
})";

std::string issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    std::string all;
    for (const auto& i : e.issues()) all += i + "\n";
    return all;
  }
  return {};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("minimal config gets documented defaults") {
  const RunConfig c = parse_config(kMinimal);
  CHECK(c.indicator().grid.delta_S == 0.5);
  CHECK(c.indicator().tau == 0.10);
  CHECK(c.cavity_segments == 128);
  CHECK(c.indicator().grid.size() == 8);
  CHECK(c.halfwidth_auto);
  CHECK(c.slab.halfwidth == doctest::Approx(auto_halfwidth(c)));
  CHECK(c.hash.size() == 16);
  CHECK(parse_config(kMinimal).hash == c.hash);
}

TEST_CASE("config errors are itemized") {
  CHECK(issues_of(R"({"geometry": {"d1": 1.0, "d2": 0.5}})").find("d1") != std::string::npos);
  const std::string inside =
      issues_of(R"({"probes": {"points": [[0.0, 1.2], [0.1, 0.5]]}, "cavity": {"type": "disc"}})");
  CHECK(inside.find("probe 1") != std::string::npos);
  CHECK(issues_of(R"({"geometry": {"d1": 0.0, "d2": 1.0, "depth": 3}})").find("depth") != std::string::npos);
  const std::string several = issues_of(R"({"geometry": {"d1": 2.0, "d2": 1.0}, "workers": 0, "typo": 1})");
  CHECK(std::count(several.begin(), several.end(), '\n') >= 3);
}

TEST_CASE("float formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("indicator command on the disc scene") {
  RunConfig c = parse_config(kMinimal);
  CommandOptions opt;
  opt.t = 0.4;
  opt.out = std::filesystem::temp_directory_path() / "slabprobe_test_indicator";
  c = apply_options(c, opt);
  const auto manifest = cmd_indicator(c, opt);
  CHECK(manifest.artifacts.size() == 3);
  const std::string slopes = slurp(*opt.out / "slopes.csv");
  CHECK(slopes.find("OUTSIDE") != std::string::npos);
}

TEST_CASE("sweep without a cavity reports a clean no-detection") {
  RunConfig c = parse_config(R"({"probes": {"line": {"start": [-0.2, 1.2], "end": [0.2, 1.2], "count": 2}},
                                  "mesh": {"target_edge": 0.1}})");
  CommandOptions opt;
  opt.out = std::filesystem::temp_directory_path() / "slabprobe_test_empty";
  c = apply_options(c, opt);
  const auto outcome = cmd_sweep(c, opt);
  CHECK(outcome.distances.ok_count() == 0);
  CHECK_FALSE(outcome.mask.has_value());
  CHECK(slurp(*opt.out / "report.txt").find("no cavity detected") != std::string::npos);
}
