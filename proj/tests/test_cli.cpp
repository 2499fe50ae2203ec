#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "varidepth/keyval.hpp"
#include "varidepth/pfm.hpp"

// Drives the installed binary end to end. The test runner passes its path in
// VARIDEPTH_CLI.

using namespace varidepth;
namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* path = std::getenv("VARIDEPTH_CLI");
  REQUIRE_MESSAGE(path != nullptr, "VARIDEPTH_CLI must point at the binary");
  return path;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const char* sub = "") const { return (path / sub).string(); }
};

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("render then self-eval yields zero errors and full accuracy") {
  TempDir dir("varidepth_cli_render");
  REQUIRE(run("render --preset default-boxes --res 48 --out " + dir.str("r")) == 0);
  CHECK(fs::exists(dir.path / "r" / "left_000.png"));
  CHECK(fs::exists(dir.path / "r" / "depth_000.pfm"));
  CHECK(fs::exists(dir.path / "r" / "manifest.kv"));

  const std::string depth = dir.str("r/depth_000.pfm");
  REQUIRE(run("eval " + depth + " " + depth + " --out " + dir.str("e")) == 0);
  const KeyValueDoc rec = KeyValueDoc::load(dir.str("e/metrics.kv"));
  CHECK(rec.get_double("mae") == 0.0);
  CHECK(rec.get_double("abs_rel") == 0.0);
  CHECK(rec.get_double("delta1") == 1.0);
  CHECK(rec.get_double("delta3") == 1.0);
}

TEST_CASE("refine with zero iterations writes the initialization constant") {
  TempDir dir("varidepth_cli_refine0");
  REQUIRE(run("refine --preset default-boxes --res 32 --iters 0 --no-expert --dist-weight 0 "
              "--out " +
              dir.str("r")) == 0);
  const DepthMap d = read_depth_pfm(dir.str("r/depth.pfm"));
  // Default initialization depth is 2 m, stored at float precision.
  CHECK((d.data - 2.0).abs().maxCoeff() < 1e-6);
}

TEST_CASE("refine runs a few steps and the trace shows descent") {
  TempDir dir("varidepth_cli_refine");
  REQUIRE(run("refine --preset default-boxes --res 32 --iters 12 --out " + dir.str("r")) == 0);
  std::ifstream trace(dir.str("r/trace.txt"));
  REQUIRE(trace.good());
  std::string first, line, last;
  std::getline(trace, first);
  int lines = 1;
  while (std::getline(trace, line)) {
    last = line;
    ++lines;
  }
  CHECK(lines == 12);
  CHECK(first.find("l_total=") != std::string::npos);
  CHECK(first.find("grad_norm=") != std::string::npos);
}

TEST_CASE("edges and align commands run on rendered output") {
  TempDir dir("varidepth_cli_edges");
  REQUIRE(run("render --preset default-boxes --res 48 --out " + dir.str("r")) == 0);
  REQUIRE(run("edges " + dir.str("r/depth_000.pfm") + " --out " + dir.str("e")) == 0);
  CHECK(fs::exists(dir.path / "e" / "edges.png"));
  const KeyValueDoc rec = KeyValueDoc::load(dir.str("e/edges.kv"));
  CHECK(rec.get_double("alpha") > 0.0);

  // Build a synthetic raw expert from the gt depth: raw = 1 / (2 d + 0.1).
  const DepthMap gt = read_depth_pfm(dir.str("r/depth_000.pfm"));
  Grid raw = Grid::Zero(gt.data.rows(), gt.data.cols());
  for (Eigen::Index v = 0; v < raw.rows(); ++v)
    for (Eigen::Index u = 0; u < raw.cols(); ++u)
      if (gt.valid(v, u)) raw(v, u) = 1.0 / (2.0 * gt.data(v, u) + 0.1);
  write_pfm(dir.str("expert.pfm"), raw);

  REQUIRE(run("align " + dir.str("expert.pfm") + " " + dir.str("r/depth_000.pfm") + " --out " +
              dir.str("a")) == 0);
  const KeyValueDoc fit = KeyValueDoc::load(dir.str("a/align.kv"));
  CHECK(fit.get_double("a_s") == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(fit.get_double("a_t") == doctest::Approx(-0.05).epsilon(1e-3));
}

TEST_CASE("cloud command writes a ply with a manifest") {
  TempDir dir("varidepth_cli_cloud");
  REQUIRE(run("render --preset default-boxes --res 32 --out " + dir.str("r")) == 0);
  REQUIRE(run("cloud " + dir.str("r/depth_000.pfm") + " " + dir.str("r/left_000.png") + " " +
              dir.str("r/intrinsics.txt") + " --out " + dir.str("c")) == 0);
  CHECK(fs::exists(dir.path / "c" / "cloud.ply"));
  CHECK(fs::exists(dir.path / "c" / "manifest.kv"));
}

TEST_CASE("exit codes: usage 1, bad input format 2") {
  CHECK(run("not-a-command") == 1);
  CHECK(run("render --preset default-boxes --scene also.kv --out /tmp/x") == 1);
  CHECK(run("render --out /tmp/varidepth_none") == 1); // neither preset nor scene

  TempDir dir("varidepth_cli_badin");
  std::ofstream(dir.str("bad.pfm")) << "not a pfm at all";
  CHECK(run("eval " + dir.str("bad.pfm") + " " + dir.str("bad.pfm")) == 2);
  CHECK(run("edges " + dir.str("missing.pfm")) == 2);
}

TEST_CASE("help exits cleanly") {
  CHECK(run("--help") == 0);
  CHECK(run("refine --help") == 0);
}
