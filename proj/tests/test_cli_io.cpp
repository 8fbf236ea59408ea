#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ggc/cli.hpp"
#include "ggc/config.hpp"
#include "ggc/csv.hpp"
#include "ggc/errors.hpp"
#include "ggc/mc.hpp"
#include "ggc/var.hpp"
#include "test_util.hpp"

using namespace ggc;
using namespace ggc_test;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ggc_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& text) {
  const std::string p = dir.file(name);
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kShippedModel = "models/stokes_purdon_example1.json";

std::string shipped_model_path() {
  // tests run from the build tree; walk up to the repository root
  fs::path p = fs::current_path();
  for (int depth = 0; depth < 6; ++depth) {
    if (fs::exists(p / kShippedModel)) return (p / kShippedModel).string();
    p = p.parent_path();
  }
  throw Error("cannot locate shipped model config");
}

}  // namespace

TEST_CASE("shipped example model loads with its experiment block") {
  const auto [model, cfg] = load_config(shipped_model_path());
  CHECK(model.n == 3);
  CHECK(model.p == 3);
  CHECK(model.stable());
  CHECK(model.spectral_radius == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(cfg.n_realisations == 1000);
  CHECK(cfg.T_list == std::vector<int>{500});
  CHECK(cfg.alpha_threshold == 0.95);
  CHECK(cfg.ci_mass == 0.9);
  CHECK(cfg.use_single);
  CHECK(cfg.use_dual);
}

TEST_CASE("unstable model configs surface the offending radius") {
  TempDir dir;
  const std::string path = write_file(dir, "unstable.json", R"({
    "n": 1, "p": 1, "coeffs": [[[1.01]]], "sigma": [[1.0]]
  })");
  try {
    load_config(path);
    FAIL("expected Unstable");
  } catch (const Unstable& e) {
    CHECK(e.rho == doctest::Approx(1.01).epsilon(1e-12));
  }
}

TEST_CASE("schema violations name the field") {
  TempDir dir;
  const std::string zero_real = write_file(dir, "a.json", R"({
    "n": 1, "p": 1, "coeffs": [[[0.5]]], "sigma": [[1.0]],
    "experiment": {"n_realisations": 0}
  })");
  try {
    load_config(zero_real);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field == "experiment.n_realisations");
  }

  const std::string unknown = write_file(dir, "b.json", R"({
    "n": 1, "p": 1, "coeffs": [[[0.5]]], "sigma": [[1.0]], "extra": 1
  })");
  CHECK_THROWS_AS(load_config(unknown), SchemaError);

  const std::string unknown_exp = write_file(dir, "c.json", R"({
    "n": 1, "p": 1, "coeffs": [[[0.5]]], "sigma": [[1.0]],
    "experiment": {"realisations": 10}
  })");
  CHECK_THROWS_AS(load_config(unknown_exp), SchemaError);

  const std::string bad_estimator = write_file(dir, "d.json", R"({
    "n": 1, "p": 1, "coeffs": [[[0.5]]], "sigma": [[1.0]],
    "experiment": {"estimators": ["single", "single"]}
  })");
  CHECK_THROWS_AS(load_config(bad_estimator), SchemaError);
}

TEST_CASE("parse errors carry a line number") {
  TempDir dir;
  const std::string path = write_file(dir, "broken.json", "{\n  \"n\": 1,\n  oops\n}\n");
  try {
    load_config(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("T accepts a scalar or a list") {
  TempDir dir;
  const std::string list = write_file(dir, "list.json", R"({
    "n": 1, "p": 1, "coeffs": [[[0.5]]], "sigma": [[1.0]],
    "experiment": {"T": [128, 256, 512]}
  })");
  const auto [model, cfg] = load_config(list);
  (void)model;
  CHECK(cfg.T_list == std::vector<int>{128, 256, 512});
}

TEST_CASE("spectral CSV: layout, ordering, and exact round trip") {
  const VarModel chain = chain_example_model();
  McConfig cfg;
  cfg.n_realisations = 20;
  cfg.T_list = {200};
  cfg.n_freq = 8;
  cfg.n_null = 20;
  cfg.master_seed = 31;
  cfg.burn_in = 100;
  cfg.workers = 2;
  const SpectralSummary summary = run_spectral_experiment(chain, cfg);

  TempDir dir;
  const std::string path = dir.file("spec.csv");
  write_spectral_csv(summary, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "source,target,freq,exact,median,ci_lo,ci_hi,threshold");

  int rows = 0;
  std::string line;
  int prev_source = 0, prev_target = 0;
  double prev_freq = -1;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    const int s = std::stoi(cells[0]);
    const int t = std::stoi(cells[1]);
    const double freq = std::stod(cells[2]);
    if (s == prev_source && t == prev_target)
      CHECK(freq > prev_freq);
    else
      CHECK(std::make_pair(s, t) > std::make_pair(prev_source, prev_target));
    prev_source = s;
    prev_target = t;
    prev_freq = freq;

    // 17-significant-digit decimal encoding round-trips bit-exactly
    const auto& pair = summary.pairs[(rows / 8)];
    const int f = rows % 8;
    CHECK(std::stod(cells[3]) == pair.exact(f));
    CHECK(std::stod(cells[4]) == pair.median(f));
    CHECK(std::stod(cells[5]) == pair.lower(f));
    CHECK(std::stod(cells[6]) == pair.upper(f));
    CHECK(std::stod(cells[7]) == pair.threshold);
    ++rows;
  }
  CHECK(rows == 6 * 8);

  // byte-identical re-serialization
  const std::string first = slurp(path);
  write_spectral_csv(summary, path);
  CHECK(slurp(path) == first);
}

TEST_CASE("sweep CSV: layout and the bias column redundancy") {
  const VarModel chain = chain_example_model();
  McConfig cfg;
  cfg.n_realisations = 15;
  cfg.T_list = {128, 256};
  cfg.master_seed = 33;
  cfg.burn_in = 100;
  cfg.workers = 2;
  const SweepSummary summary = run_bias_variance_experiment(chain, cfg);

  TempDir dir;
  const std::string path = dir.file("sweep.csv");
  write_sweep_csv(summary, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "source,target,T,estimator,exact,median,bias,mad");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    CHECK((cells[3] == "single" || cells[3] == "dual"));
    CHECK(std::stod(cells[6]) == std::stod(cells[5]) - std::stod(cells[4]));
    ++rows;
  }
  CHECK(rows == 6 * 2 * 2);
}

TEST_CASE("time-series CSV reader: shape, values, and errors") {
  TempDir dir;
  const std::string good = write_file(dir, "data.csv", "1.5,2\n-0.25,4\n3,5\n");
  const TimeSeries ts = read_time_series_csv(good);
  CHECK(ts.n == 2);
  CHECK(ts.T == 3);
  CHECK(ts.data(0, 0) == 1.5);
  CHECK(ts.data(1, 2) == 5.0);

  const std::string ragged = write_file(dir, "ragged.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_time_series_csv(ragged), ParseError);
  const std::string junk = write_file(dir, "junk.csv", "1,x\n");
  CHECK_THROWS_AS(read_time_series_csv(junk), ParseError);
}

TEST_CASE("manifest requires non-empty outputs and echoes the config") {
  const auto [model, cfg] = load_config(shipped_model_path());
  TempDir dir;
  RunManifest manifest;
  manifest.tool_version = "test";
  manifest.outputs = {dir.file("missing.csv")};
  CHECK_THROWS_AS(write_run_manifest(dir.file("m.json"), manifest, model, cfg), Error);

  write_file(dir, "out.csv", "hello\n");
  manifest.outputs = {dir.file("out.csv")};
  write_run_manifest(dir.file("m.json"), manifest, model, cfg);
  const std::string text = slurp(dir.file("m.json"));
  CHECK(text.find("\"tool_version\": \"test\"") != std::string::npos);
  CHECK(text.find("\"master_seed\": 42") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 1, unknown subcommands exit 1") {
  CHECK(run_cli({"definitely-not-a-command"}) == 1);
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"fig1"}) == 1);  // --model required
}

TEST_CASE("cli: exact on an unstable config exits 2") {
  TempDir dir;
  const std::string path = write_file(dir, "unstable.json", R"({
    "n": 1, "p": 1, "coeffs": [[[1.2]]], "sigma": [[1.0]]
  })");
  CHECK(run_cli({"exact", "--model", path}) == 2);
}

TEST_CASE("cli: fig1 writes its CSV and manifest, exit 0") {
  TempDir dir;
  const std::string model_path = shipped_model_path();
  const std::string out = dir.file("fig1.csv");
  const int code = run_cli({"fig1", "--model", model_path, "--out", out, "--seed", "5",
                            "--realisations", "25", "--workers", "2"});
  CHECK(code == 0);
  CHECK(fs::exists(out));
  CHECK(fs::file_size(out) > 0);
  CHECK(fs::exists(out + ".manifest.json"));
  // 25 realisations but the shipped n_null = 1000 would dominate; make sure
  // the file has the full pair x frequency table regardless
  std::ifstream in(out);
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 6 * 256);
}

TEST_CASE("cli: estimate runs both estimators on a data file") {
  TempDir dir;
  const VarModel chain = chain_example_model();
  const TimeSeries ts = simulate_var(chain, 400, 500, 77);
  std::ostringstream data;
  for (int t = 0; t < ts.T; ++t) {
    for (int c = 0; c < ts.n; ++c) {
      if (c) data << ',';
      data << ts.data(c, t);
    }
    data << '\n';
  }
  const std::string data_path = write_file(dir, "data.csv", data.str());
  const std::string out = dir.file("spec.csv");
  CHECK(run_cli({"estimate", "--data", data_path, "--order", "3", "--nfreq", "16", "--out", out}) ==
        0);
  CHECK(fs::exists(out));
}
