#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "goupillaud/experiment.hpp"
#include "test_support.hpp"

using namespace goupillaud;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is, "test.cfg");
}

std::size_t error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("expected a ConfigError");
  return 0;
}

std::string slurp(const fs::path& file) {
  std::ifstream is(file);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("goupillaud_test_" + name)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig small_config(DriverKind kind, const fs::path& out) {
  ExperimentConfig cfg;
  cfg.driver = kind == DriverKind::Gamma ? SubordinatorSpec::gamma(1.0, 1.0, 1.0)
                                         : SubordinatorSpec::compound_poisson(1.0, 1.0, 1.0);
  cfg.levels = {2, 4};
  cfg.reference_level = 8;
  cfg.replicas = 4;
  cfg.grid_nx = 16;
  cfg.grid_nt = 8;
  cfg.probe_points = 20;
  cfg.fio_points = 5;
  cfg.fio_steps = 2048;
  cfg.solve_samples = 41;
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults") {
  const ExperimentConfig cfg = parse("");
  CHECK(cfg.driver.kind == DriverKind::CompoundPoisson);
  CHECK(cfg.driver.intensity == 1.0);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.levels.front() == 2);
  CHECK(cfg.levels.back() == 10);
  CHECK(cfg.reference_level == 14);
  CHECK(cfg.replicas == 64);
  CHECK(cfg.grid_nx == 512);
  CHECK(cfg.fio_steps == 16384);
  CHECK(cfg.finest_level() == 10);
  CHECK_FALSE(cfg.window.has_value());
}

TEST_CASE("parsing every key") {
  const ExperimentConfig cfg = parse(R"(# gamma run
driver = gamma
drift = 0.5
shape = 2
scale = 0.25
seed = 18446744073709551615
window = -2, 6
levels = 3, 5, 7   # trailing comment
n_ref = 12
u0 = gaussian
u0_center = 0.5
u0_width = 0.2
box = 0, 2, 0, 1
p = 1, 1.5
replicas = 10
grid = 64, 33
fio_bandwidth = 50
fio_steps = 1024
fio_points = 7
times = 0.5, 1
solve_x = -1, 3
solve_samples = 11
probe_points = 3
out = results
workers = 2
)");
  CHECK(cfg.driver.kind == DriverKind::Gamma);
  CHECK(cfg.driver.drift == 0.5);
  CHECK(cfg.driver.shape == 2.0);
  CHECK(cfg.driver.scale == 0.25);
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  REQUIRE(cfg.window.has_value());
  CHECK(cfg.window->lo == -2.0);
  CHECK(cfg.levels == std::vector<int>{3, 5, 7});
  CHECK(cfg.reference_level == 12);
  CHECK(cfg.u0.kind() == InitialData::Kind::Gaussian);
  CHECK(cfg.u0.width() == 0.2);
  CHECK(cfg.box.x_hi == 2.0);
  CHECK(cfg.exponents == std::vector<double>{1.0, 1.5});
  CHECK(cfg.replicas == 10);
  CHECK(cfg.grid_nx == 64);
  CHECK(cfg.grid_nt == 33);
  CHECK(cfg.fio_bandwidth == 50.0);
  CHECK(cfg.fio_steps == 1024);
  CHECK(cfg.fio_points == 7);
  CHECK(cfg.times == std::vector<double>{0.5, 1.0});
  CHECK(cfg.solve_x_lo == -1.0);
  CHECK(cfg.solve_samples == 11);
  CHECK(cfg.probe_points == 3);
  CHECK(cfg.output_dir == fs::path("results"));
  CHECK(cfg.workers == 2);

  CHECK(parse("levels = 2..5").levels == std::vector<int>{2, 3, 4, 5});
  CHECK(parse("driver = drift\ndrift = 3").driver.intensity == 0.0);
}

TEST_CASE("errors name the offending line") {
  CHECK(error_line("seed = 1\nbogus = 2\n") == 2);
  CHECK(error_line("seed = 1\nseed = 2\n") == 2);
  CHECK(error_line("\n\nno equals sign\n") == 3);
  CHECK(error_line("drift = abc") == 1);
  CHECK(error_line("replicas = 1.5") == 1);
  CHECK(error_line("seed = -3") == 1);
  CHECK(error_line("driver = levy") == 1);
  CHECK(error_line("u0 = square") == 1);
  CHECK(error_line("# comment\ndrift = -1\n") == 2);
  CHECK(error_line("box = 0, 1, 0") == 1);
  CHECK(error_line("\nbox = 1, 0, 0, 1") == 2);
  CHECK(error_line("levels = 5..2") == 1);
  CHECK(error_line("x\nwindow = 1, 2") == 1);
  CHECK(error_line("window = 1, 2") == 1);
  CHECK(error_line("p = 0.5") == 1);
  CHECK(error_line("workers = 0") == 1);
  CHECK(error_line("grid = 0, 4") == 1);
  CHECK(error_line("fio_steps = 1") == 1);
  CHECK(error_line("driver = gamma\nn_ref = 6\nlevels = 2..8") == 3);
  CHECK(error_line("u0_width = 0\n") == 1);
  CHECK(error_line("drift =") == 1);

  try {
    parse("\nbogus = 1");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "test.cfg:2: unknown key 'bogus'");
  }
  CHECK_THROWS_AS(load_config("/nonexistent/goupillaud.cfg"), ConfigError);
}

TEST_CASE("figure presets") {
  const auto g = figure2_config(DriverKind::Gamma);
  CHECK(g.driver.kind == DriverKind::Gamma);
  CHECK(g.levels == std::vector<int>{12});
  CHECK(g.times == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(g.reference_level == 14);
  const auto p = figure2_config(DriverKind::CompoundPoisson);
  CHECK(p.driver.intensity == 1.0);
  CHECK(p.driver.jump_size == 1.0);
  CHECK(p.driver.drift == 1.0);
  CHECK(p.u0.kind() == InitialData::Kind::Triangular);
}

TEST_CASE("self test passes") {
  std::ostringstream log;
  CHECK(cmd_selftest(log) == 0);
  CHECK(log.str().find("selftest passed") != std::string::npos);
}

TEST_CASE("sample-path command") {
  TempDir dir("sample");
  std::ostringstream log;
  const auto poisson = cmd_sample_path(small_config(DriverKind::CompoundPoisson, dir.path), log);
  REQUIRE(poisson.size() == 1);
  CHECK(slurp(poisson[0]).rfind("kind=jump_path", 0) == 0);
  const auto gamma = cmd_sample_path(small_config(DriverKind::Gamma, dir.path), log);
  REQUIRE(gamma.size() == 1);
  CHECK(gamma[0].filename() == "grid_N8.txt");
  CHECK(slurp(gamma[0]).rfind("kind=grid_path level=8", 0) == 0);
}

TEST_CASE("solve command") {
  TempDir dir("solve");
  std::ostringstream log;
  const auto files = cmd_solve(small_config(DriverKind::CompoundPoisson, dir.path), log);
  CHECK(files.size() == 4);
  CHECK(fs::exists(dir.path / "medium_N4.csv"));
  CHECK(fs::exists(dir.path / "solution_N4.csv"));
  const std::string limit = slurp(dir.path / "solution_limit.csv");
  CHECK(limit.rfind("t,1,2,3\n", 0) == 0);

  const auto gfiles = cmd_solve(small_config(DriverKind::Gamma, dir.path), log);
  CHECK(fs::exists(dir.path / "solution_limit_surrogate_N8.csv"));
  CHECK(gfiles.size() == 3);
}

TEST_CASE("converge command is deterministic across worker counts") {
  TempDir a("converge_a"), b("converge_b");
  std::ostringstream log;
  ExperimentConfig cfg = small_config(DriverKind::CompoundPoisson, a.path);
  cmd_converge(cfg, log);
  cfg.output_dir = b.path;
  cfg.workers = 4;
  const auto files = cmd_converge(cfg, log);
  CHECK(files.size() == 3);
  for (const char* name : {"errors.csv", "probes.csv", "probe_levels.csv"})
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  CHECK(slurp(a.path / "errors.csv").rfind("N,mean,stderr,R,p\n# p=1 limit=exact\n2,", 0) == 0);
  CHECK(slurp(a.path / "probes.csv").rfind("x,t,continuity_flag,gap_at_Nmax\n", 0) == 0);
}

TEST_CASE("fio-check command") {
  TempDir dir("fio");
  std::ostringstream log;
  ExperimentConfig cfg = small_config(DriverKind::CompoundPoisson, dir.path);
  cfg.u0 = InitialData::gaussian(0.0, 1.0);
  cfg.fio_bandwidth = 20.0;
  const FioCheckSummary s = cmd_fio_check(cfg, log);
  CHECK(s.points == 5);
  CHECK(s.within_tolerance == 5);
  CHECK(s.max_deviation < 1e-6);
  CHECK(fs::exists(dir.path / "fio_check.csv"));

  cfg.u0 = InitialData::smoothed_step(0.0, 1.0);
  CHECK(testing::kind_of([&] { cmd_fio_check(cfg, log); }) == ErrorKind::NoIntegrableTransform);
}

}  // TEST_SUITE
