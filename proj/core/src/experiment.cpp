#include "goupillaud/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "goupillaud/characteristics.hpp"
#include "goupillaud/dyadic_medium.hpp"
#include "goupillaud/error.hpp"
#include "goupillaud/random.hpp"
#include "goupillaud/text_io.hpp"

namespace goupillaud {

namespace fs = std::filesystem;

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

namespace {

// Stream tags for auxiliary draws; Monte Carlo replicas use indices 0..R-1.
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;
constexpr std::uint64_t kFioStream = 0x66696fULL;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct ValueParser {
  const std::string& source;
  std::size_t line;
  const std::string& key;

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError(source, line, "key '" + key + "': " + why);
  }

  double real(const std::string& v) const {
    try {
      return parse_real(v);
    } catch (const DomainError&) {
      fail("expected a number, got '" + v + "'");
    }
  }

  long long integer(const std::string& v) const {
    long long out = 0;
    std::size_t used = 0;
    try {
      out = std::stoll(v, &used);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + v + "'");
    }
    if (used != v.size()) fail("expected an integer, got '" + v + "'");
    return out;
  }

  std::size_t count(const std::string& v) const {
    const long long n = integer(v);
    if (n < 0) fail("must be non-negative");
    return static_cast<std::size_t>(n);
  }

  std::uint64_t u64(const std::string& v) const {
    std::uint64_t out = 0;
    std::size_t used = 0;
    try {
      if (!v.empty() && v.front() == '-') throw std::invalid_argument("negative");
      out = std::stoull(v, &used);
    } catch (const std::exception&) {
      fail("expected an unsigned 64-bit integer, got '" + v + "'");
    }
    if (used != v.size()) fail("expected an unsigned 64-bit integer, got '" + v + "'");
    return out;
  }

  std::vector<double> reals(const std::string& v, std::size_t expected = 0) const {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(real(item));
    if (out.empty()) fail("expected a comma-separated list of numbers");
    if (expected > 0 && out.size() != expected)
      fail("expected " + std::to_string(expected) + " comma-separated numbers");
    return out;
  }

  // "2..10" or "2,4,6".
  std::vector<int> levels(const std::string& v) const {
    std::vector<int> out;
    const auto dots = v.find("..");
    if (dots != std::string::npos) {
      const long long a = integer(trim(v.substr(0, dots)));
      const long long b = integer(trim(v.substr(dots + 2)));
      if (b < a) fail("empty level range");
      for (long long n = a; n <= b; ++n) out.push_back(static_cast<int>(n));
    } else {
      for (const auto& item : split_list(v)) out.push_back(static_cast<int>(integer(item)));
    }
    if (out.empty()) fail("expected at least one level");
    return out;
  }
};

std::size_t line_of(const ExperimentConfig& cfg, const std::string& key) {
  const auto it = cfg.key_lines.find(key);
  return it == cfg.key_lines.end() ? 0 : it->second;
}

std::ofstream open_output(const fs::path& file) {
  fs::create_directories(file.parent_path());
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  return os;
}

EvalGrid solve_grid(const ExperimentConfig& cfg) {
  std::vector<double> x(cfg.solve_samples);
  const double step = (cfg.solve_x_hi - cfg.solve_x_lo) / static_cast<double>(cfg.solve_samples - 1);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = cfg.solve_x_lo + static_cast<double>(i) * step;
  return EvalGrid::nodes(std::move(x), cfg.times);
}

TimeWindow solve_window(const ExperimentConfig& cfg) {
  if (cfg.window) return *cfg.window;
  const auto [t_min, t_max] = std::minmax_element(cfg.times.begin(), cfg.times.end());
  return characteristic_window({cfg.solve_x_lo, cfg.solve_x_hi, std::min(0.0, *t_min), std::max(0.0, *t_max)},
                               cfg.driver.drift, 1.0);
}

TimeWindow box_window(const ExperimentConfig& cfg) {
  if (cfg.window) return *cfg.window;
  return characteristic_window(cfg.box, cfg.driver.drift, 1.0);
}

std::string level_tag(int n) { return "N" + std::to_string(n); }

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

int ExperimentConfig::finest_level() const { return *std::max_element(levels.begin(), levels.end()); }

void ExperimentConfig::validate() const {
  auto fail = [&](const std::string& key, const std::string& why) {
    throw ConfigError(source, line_of(*this, key), "key '" + key + "': " + why);
  };
  try {
    driver.validate();
  } catch (const DomainError& e) {
    const std::string key = e.kind() == ErrorKind::NonPositiveDrift ? "drift" : "driver";
    fail(key, e.what());
  }
  if (window && !(window->lo <= 0.0 && 0.0 <= window->hi && window->lo < window->hi))
    fail("window", "must contain 0 and have t_lo < t_hi");
  if (levels.empty()) fail("levels", "at least one level required");
  for (int n : levels) {
    if (n < 0 || n > 30) fail("levels", "levels must lie in [0, 30]");
    if (driver.kind == DriverKind::Gamma && n >= reference_level)
      fail("levels", "Gamma levels must be below n_ref = " + std::to_string(reference_level));
  }
  if (reference_level < 0 || reference_level > 24) fail("n_ref", "must lie in [0, 24]");
  if (!(box.x_hi > box.x_lo) || !(box.t_hi > box.t_lo)) fail("box", "needs x_lo < x_hi and t_lo < t_hi");
  for (double p : exponents)
    if (!(p >= 1.0)) fail("p", "exponents must be >= 1");
  if (replicas < 1) fail("replicas", "must be >= 1");
  if (grid_nx == 0 || grid_nt == 0) fail("grid", "resolution must be positive");
  if (!(fio_bandwidth > 0.0)) fail("fio_bandwidth", "must be > 0");
  if (fio_steps < 2) fail("fio_steps", "must be >= 2");
  if (times.empty()) fail("times", "at least one time required");
  if (!(solve_x_hi > solve_x_lo)) fail("solve_x", "needs lo < hi");
  if (solve_samples < 2) fail("solve_samples", "must be >= 2");
  if (workers < 1) fail("workers", "must be >= 1");
}

ExperimentConfig parse_config(std::istream& is, const std::string& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  std::string driver_name = "poisson";
  std::string u0_name = "triangular";
  double drift = 1.0, intensity = 1.0, jump_size = 1.0, shape = 1.0, scale = 1.0;
  double u0_center = 0.0, u0_width = 1.0, u0_height = 1.0;

  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError(source, lineno, "key '" + key + "' has no value");
    if (cfg.key_lines.count(key)) throw ConfigError(source, lineno, "duplicate key '" + key + "'");
    cfg.key_lines[key] = lineno;
    const ValueParser v{source, lineno, key};

    if (key == "driver") {
      if (value != "poisson" && value != "gamma" && value != "drift")
        v.fail("expected poisson, gamma or drift");
      driver_name = value;
    } else if (key == "drift") {
      drift = v.real(value);
    } else if (key == "intensity") {
      intensity = v.real(value);
    } else if (key == "jump_size") {
      jump_size = v.real(value);
    } else if (key == "shape") {
      shape = v.real(value);
    } else if (key == "scale") {
      scale = v.real(value);
    } else if (key == "seed") {
      cfg.master_seed = v.u64(value);
    } else if (key == "window") {
      const auto w = v.reals(value, 2);
      cfg.window = TimeWindow{w[0], w[1]};
    } else if (key == "levels") {
      cfg.levels = v.levels(value);
    } else if (key == "n_ref") {
      cfg.reference_level = static_cast<int>(v.integer(value));
    } else if (key == "u0") {
      if (value != "triangular" && value != "gaussian" && value != "smoothed_step")
        v.fail("expected triangular, gaussian or smoothed_step");
      u0_name = value;
    } else if (key == "u0_center") {
      u0_center = v.real(value);
    } else if (key == "u0_width") {
      u0_width = v.real(value);
    } else if (key == "u0_height") {
      u0_height = v.real(value);
    } else if (key == "box") {
      const auto b = v.reals(value, 4);
      cfg.box = Box{b[0], b[1], b[2], b[3]};
    } else if (key == "p") {
      cfg.exponents = v.reals(value);
    } else if (key == "replicas") {
      cfg.replicas = v.count(value);
    } else if (key == "grid") {
      const auto g = v.reals(value, 2);
      if (g[0] < 1 || g[1] < 1 || g[0] != std::floor(g[0]) || g[1] != std::floor(g[1]))
        v.fail("expected two positive integers");
      cfg.grid_nx = static_cast<std::size_t>(g[0]);
      cfg.grid_nt = static_cast<std::size_t>(g[1]);
    } else if (key == "fio_bandwidth") {
      cfg.fio_bandwidth = v.real(value);
    } else if (key == "fio_steps") {
      cfg.fio_steps = v.count(value);
    } else if (key == "fio_points") {
      cfg.fio_points = v.count(value);
    } else if (key == "times") {
      cfg.times = v.reals(value);
    } else if (key == "solve_x") {
      const auto r = v.reals(value, 2);
      cfg.solve_x_lo = r[0];
      cfg.solve_x_hi = r[1];
    } else if (key == "solve_samples") {
      cfg.solve_samples = v.count(value);
    } else if (key == "probe_points") {
      cfg.probe_points = v.count(value);
    } else if (key == "out") {
      cfg.output_dir = value;
    } else if (key == "workers") {
      const long long w = v.integer(value);
      if (w < 1) v.fail("must be >= 1");
      cfg.workers = static_cast<unsigned>(w);
    } else {
      throw ConfigError(source, lineno, "unknown key '" + key + "'");
    }
  }

  if (driver_name == "gamma")
    cfg.driver = SubordinatorSpec::gamma(shape, scale, drift);
  else if (driver_name == "drift")
    cfg.driver = SubordinatorSpec::drift_only(drift);
  else
    cfg.driver = SubordinatorSpec::compound_poisson(intensity, jump_size, drift);

  try {
    if (u0_name == "gaussian")
      cfg.u0 = InitialData::gaussian(u0_center, u0_width);
    else if (u0_name == "smoothed_step")
      cfg.u0 = InitialData::smoothed_step(u0_center, u0_width);
    else
      cfg.u0 = InitialData::triangular(u0_center, u0_width, u0_height);
  } catch (const DomainError& e) {
    throw ConfigError(source, line_of(cfg, "u0_width"), e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError(file.string(), 0, "cannot open config file");
  return parse_config(is, file.string());
}

ExperimentConfig figure2_config(DriverKind kind) {
  ExperimentConfig cfg;
  cfg.driver = kind == DriverKind::Gamma ? SubordinatorSpec::gamma(1.0, 1.0, 1.0)
                                         : SubordinatorSpec::compound_poisson(1.0, 1.0, 1.0);
  cfg.u0 = InitialData::triangular(0.0, 1.0, 1.0);
  cfg.times = {1.0, 2.0, 3.0};
  cfg.levels = {12};
  cfg.reference_level = 14;
  cfg.source = "<figure2>";
  return cfg;
}

// ---------------------------------------------------------------------------
// Commands

std::vector<fs::path> cmd_sample_path(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const TimeWindow window = cfg.window.value_or(TimeWindow{-1.0, 4.0});
  std::vector<fs::path> written;
  if (cfg.driver.kind == DriverKind::CompoundPoisson) {
    const JumpPath path = sample_compound_poisson(cfg.driver, window, cfg.master_seed);
    const fs::path file = cfg.output_dir / "path.txt";
    auto os = open_output(file);
    write_jump_path(os, path);
    written.push_back(file);
    log << "jump path: jumps=" << path.jumps().size() << " X(t_hi)=" << format_real(path.evaluate(window.hi))
        << " -> " << file.string() << '\n';
  } else {
    const GridPath grid =
        sample_gamma_grid(cfg.driver, cfg.reference_level, knot_window(window, cfg.reference_level), cfg.master_seed);
    const fs::path file = cfg.output_dir / ("grid_" + level_tag(cfg.reference_level) + ".txt");
    auto os = open_output(file);
    write_grid_path(os, grid);
    written.push_back(file);
    log << "gamma grid: level=" << grid.level() << " increments=" << grid.increments().size()
        << " X(t_hi)=" << format_real(grid.knot_values().back()) << " -> " << file.string() << '\n';
  }
  return written;
}

std::vector<fs::path> cmd_solve(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const TimeWindow window = solve_window(cfg);
  const EvalGrid grid = solve_grid(cfg);
  const int finest = cfg.finest_level();
  std::vector<fs::path> written;
  auto dump = [&](const SolutionField& field, const std::string& name) {
    const fs::path file = cfg.output_dir / name;
    auto os = open_output(file);
    write_solution(os, field);
    written.push_back(file);
  };

  if (cfg.driver.kind == DriverKind::CompoundPoisson) {
    const JumpPath path = sample_compound_poisson(cfg.driver, window, cfg.master_seed);
    {
      const fs::path file = cfg.output_dir / "path.txt";
      auto os = open_output(file);
      write_jump_path(os, path);
      written.push_back(file);
    }
    const GridPath increments = increments_at_level(path, finest, knot_window(window, finest));
    {
      const fs::path file = cfg.output_dir / ("medium_" + level_tag(finest) + ".csv");
      auto os = open_output(file);
      write_medium(os, LayeredMedium(increments));
      written.push_back(file);
    }
    dump(solve_discrete(PiecewiseLinearPath::from_path(path, finest), cfg.u0, grid),
         "solution_" + level_tag(finest) + ".csv");
    dump(solve_limit(path, cfg.u0, grid), "solution_limit.csv");
    log << "solved on " << path.jumps().size() << " jumps, window [" << format_real(window.lo) << ", "
        << format_real(window.hi) << "]\n";
  } else {
    const GridPath fine = sample_gamma_grid(cfg.driver, cfg.reference_level,
                                            knot_window(window, cfg.reference_level), cfg.master_seed);
    const GridPath coarse = coarsen(fine, finest);
    {
      const fs::path file = cfg.output_dir / ("medium_" + level_tag(finest) + ".csv");
      auto os = open_output(file);
      write_medium(os, LayeredMedium(coarse));
      written.push_back(file);
    }
    dump(solve_discrete(PiecewiseLinearPath::from_grid(coarse), cfg.u0, grid),
         "solution_" + level_tag(finest) + ".csv");
    SolutionField surrogate = solve_discrete(PiecewiseLinearPath::from_grid(fine), cfg.u0, grid);
    surrogate.provenance = "limit surrogate N_ref=" + std::to_string(cfg.reference_level);
    dump(surrogate, "solution_limit_surrogate_" + level_tag(cfg.reference_level) + ".csv");
    log << "solved on gamma grid level " << cfg.reference_level << ", window [" << format_real(window.lo)
        << ", " << format_real(window.hi) << "]\n";
  }
  for (const auto& f : written) log << "  wrote " << f.string() << '\n';
  return written;
}

std::vector<fs::path> cmd_converge(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  McOptions opt;
  opt.box = cfg.box;
  opt.nx = cfg.grid_nx;
  opt.nt = cfg.grid_nt;
  opt.exponents = cfg.exponents;
  opt.levels = cfg.levels;
  opt.replicas = cfg.replicas;
  opt.master_seed = cfg.master_seed;
  opt.reference_level = cfg.reference_level;
  opt.workers = cfg.workers;
  if (cfg.window) {
    // Honour an explicit window by sizing the margin to reach it.
    const TimeWindow tight = characteristic_window(cfg.box, cfg.driver.drift, 0.0);
    opt.window_margin = std::min(tight.lo - cfg.window->lo, cfg.window->hi - tight.hi);
  }
  const auto reports = mc_expected_error(cfg.driver, cfg.u0, opt);

  std::vector<fs::path> written;
  const fs::path report_file = cfg.output_dir / "errors.csv";
  {
    auto os = open_output(report_file);
    write_error_report(os, reports);
  }
  written.push_back(report_file);
  for (const auto& rep : reports) {
    log << "p=" << format_real(rep.p) << (rep.surrogate ? " (surrogate limit)" : "") << '\n';
    for (const auto& s : rep.levels)
      log << "  N=" << s.level << " mean=" << format_real(s.mean) << " stderr=" << format_real(s.std_error) << '\n';
    if (!rep.failures.empty()) log << "  " << rep.failures.size() << " replicas failed\n";
  }

  if (cfg.driver.kind == DriverKind::CompoundPoisson && cfg.probe_points > 0) {
    // Pointwise probes on the path of replica 0.
    const TimeWindow window = box_window(cfg);
    const JumpPath path = sample_compound_poisson(cfg.driver, window, stream_seed(cfg.master_seed, 0));
    std::vector<PiecewiseLinearPath> polygons;
    for (int n : cfg.levels) polygons.push_back(PiecewiseLinearPath::from_path(path, n));
    Xoshiro256 rng(stream_seed(cfg.master_seed, kProbeStream));
    std::vector<double> max_gap(cfg.levels.size(), 0.0);
    const fs::path probe_file = cfg.output_dir / "probes.csv";
    auto os = open_output(probe_file);
    os << "x,t,continuity_flag,gap_at_Nmax\n";
    const auto finest = static_cast<std::size_t>(
        std::max_element(cfg.levels.begin(), cfg.levels.end()) - cfg.levels.begin());
    for (std::size_t i = 0; i < cfg.probe_points; ++i) {
      const double x = cfg.box.x_lo + (cfg.box.x_hi - cfg.box.x_lo) * (1.0 - rng.uniform_open0());
      const double t = cfg.box.t_lo + (cfg.box.t_hi - cfg.box.t_lo) * (1.0 - rng.uniform_open0());
      const bool continuous = is_continuity_point(path, 0.0, x, t);
      const auto gaps = convergence_probe(path, polygons, 0.0, x, t);
      if (continuous)
        for (std::size_t l = 0; l < gaps.size(); ++l) max_gap[l] = std::max(max_gap[l], gaps[l].gap);
      os << format_real(x) << ',' << format_real(t) << ',' << (continuous ? 1 : 0) << ','
         << format_real(gaps[finest].gap) << '\n';
    }
    written.push_back(probe_file);
    const fs::path summary_file = cfg.output_dir / "probe_levels.csv";
    auto ss = open_output(summary_file);
    ss << "N,gap\n";
    for (std::size_t l = 0; l < cfg.levels.size(); ++l)
      ss << cfg.levels[l] << ',' << format_real(max_gap[l]) << '\n';
    written.push_back(summary_file);
  }
  for (const auto& f : written) log << "wrote " << f.string() << '\n';
  return written;
}

FioCheckSummary cmd_fio_check(const ExperimentConfig& cfg, std::ostream& log) {
  cfg.validate();
  const TimeWindow window = box_window(cfg);
  Xoshiro256 rng(stream_seed(cfg.master_seed, kFioStream));

  std::optional<JumpPath> path;
  std::optional<PiecewiseLinearPath> surrogate;
  if (cfg.driver.kind == DriverKind::CompoundPoisson)
    path = sample_compound_poisson(cfg.driver, window, cfg.master_seed);
  else
    surrogate = PiecewiseLinearPath::from_grid(sample_gamma_grid(
        cfg.driver, cfg.reference_level, knot_window(window, cfg.reference_level), cfg.master_seed));

  FioCheckSummary summary;
  const fs::path file = cfg.output_dir / "fio_check.csv";
  auto os = open_output(file);
  os << "x,t,gamma,u0,fio,imag,deviation,tolerance\n";
  for (std::size_t i = 0; i < cfg.fio_points; ++i) {
    const double x = cfg.box.x_lo + (cfg.box.x_hi - cfg.box.x_lo) * (1.0 - rng.uniform_open0());
    const double t = cfg.box.t_lo + (cfg.box.t_hi - cfg.box.t_lo) * (1.0 - rng.uniform_open0());
    const double g = path ? gamma_limit(*path, 0.0, x, t) : gamma_discrete(*surrogate, 0.0, x, t);
    const FioResult fio = fio_evaluate(g, cfg.u0, cfg.fio_bandwidth, cfg.fio_steps);
    const double exact = cfg.u0(g);
    const double deviation = std::fabs(fio.value - exact);
    const double tol = fio_tolerance(cfg.u0, g, cfg.fio_bandwidth, cfg.fio_steps);
    summary.max_deviation = std::max(summary.max_deviation, deviation);
    summary.max_tolerance = std::max(summary.max_tolerance, tol);
    ++summary.points;
    if (deviation <= tol) ++summary.within_tolerance;
    os << format_real(x) << ',' << format_real(t) << ',' << format_real(g) << ',' << format_real(exact) << ','
       << format_real(fio.value) << ',' << format_real(fio.imag_residue) << ',' << format_real(deviation) << ','
       << format_real(tol) << '\n';
  }
  log << "fio-check " << cfg.u0.describe() << ": points=" << summary.points
      << " max_deviation=" << format_real(summary.max_deviation)
      << " analytic_tolerance=" << format_real(summary.max_tolerance)
      << " within_tolerance=" << summary.within_tolerance << "/" << summary.points << '\n';
  log << "wrote " << file.string() << '\n';
  return summary;
}

std::vector<fs::path> cmd_figure2(const ExperimentConfig& base, std::ostream& log) {
  std::vector<fs::path> written;
  for (const auto kind : {DriverKind::Gamma, DriverKind::CompoundPoisson}) {
    ExperimentConfig cfg = figure2_config(kind);
    cfg.master_seed = base.master_seed;
    cfg.workers = base.workers;
    cfg.output_dir = base.output_dir / (kind == DriverKind::Gamma ? "gamma" : "poisson");
    log << (kind == DriverKind::Gamma ? "[gamma shape=1 scale=1 drift=1]\n"
                                      : "[poisson intensity=1 jump=1 drift=1]\n");
    const auto files = cmd_solve(cfg, log);
    written.insert(written.end(), files.begin(), files.end());
  }
  return written;
}

// ---------------------------------------------------------------------------
// Self test

int cmd_selftest(std::ostream& log) {
  int failures = 0;
  auto check = [&](const std::string& name, double got, double expected, double scale = 0.0) {
    const double ref = std::max(std::fabs(expected), scale);
    const double ulp = std::nextafter(ref, INFINITY) - ref;
    const bool ok = std::fabs(got - expected) <= 10.0 * ulp;
    if (!ok) ++failures;
    log << (ok ? "[PASS] " : "[FAIL] ") << name << ": got " << format_real(got) << ", expected "
        << format_real(expected) << '\n';
  };
  auto check_bool = [&](const std::string& name, bool got, bool expected) {
    const bool ok = got == expected;
    if (!ok) ++failures;
    log << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
  };

  const JumpPath path(1.0, {0.0, 1.0}, {{0.5, 2.0}});
  check("X(0.25)", path.evaluate(0.25), 0.25);
  check("X(0.5)", path.evaluate(0.5), 2.5);
  check("X(0.5-)", path.left_limit(0.5), 0.5);
  check("X*(1)", path.generalized_inverse(1.0), 0.5);
  check("X*(0.25)", path.generalized_inverse(0.25), 0.25);

  const GridPath level1 = increments_at_level(path, 1, {0, 2});
  check("dX_1^(1)", level1.increment(1), 2.5);
  check("dX_2^(1)", level1.increment(2), 0.5);
  check("coarsen to level 0", coarsen(level1, 0).increment(1), 3.0);

  const LayeredMedium medium(level1);
  check("C_1^(1)", medium.speed(1), 5.0);
  check("C_2^(1)", medium.speed(2), 1.0);
  check("speed_at(1)", medium.speed_at(1.0), 5.0);
  check("speed_at(2.5)", medium.speed_at(2.5), 1.0);

  const PiecewiseLinearPath xi1 = PiecewiseLinearPath::from_path(path, 1);
  const PiecewiseLinearPath xi2 = PiecewiseLinearPath::from_path(path, 2);
  const PiecewiseLinearPath xi3 = PiecewiseLinearPath::from_path(path, 3);
  check("xi^(1)(0.25)", xi1.interpolate(0.25), 1.25);
  check("inverse_1(1)", xi1.inverse(1.0), 0.2);
  check("gamma^(1)(0;1,0.1)", gamma_discrete(xi1, 0.0, 1.0, 0.1), 0.5);
  check("gamma^(2)(0;1,0.1)", gamma_discrete(xi2, 0.0, 1.0, 0.1), 7.0 / 30.0);
  check("gamma^(3)(0;1,0.1)", gamma_discrete(xi3, 0.0, 1.0, 0.1), 0.275 + 5.0 / 136.0);
  check("Gamma(0;1,0.1)", gamma_limit(path, 0.0, 1.0, 0.1), 0.4);
  check("Gamma(0;1,0)", gamma_limit(path, 0.0, 1.0, 0.0), 2.5);
  check_bool("continuity at (0;1,0.1)", is_continuity_point(path, 0.0, 1.0, 0.1), true);
  check_bool("discontinuity at (0;1,0)", is_continuity_point(path, 0.0, 1.0, 0.0), false);

  const std::vector<int> levels{1, 2, 3};
  const auto gaps = convergence_probe(path, 0.0, 1.0, 0.1, levels);
  check("gap N=1", gaps[0].gap, 0.1, 0.5);
  check("gap N=2", gaps[1].gap, 1.0 / 6.0, 0.4);
  check("gap N=3", gaps[2].gap, 3.0 / 34.0, 0.4);

  const InitialData u0 = InitialData::triangular(0.0, 1.0, 1.0);
  const EvalGrid one = EvalGrid::nodes({1.0}, {0.1});
  check("U^(2)(0.1,1)", solve_discrete(xi2, u0, one).at(0, 0), 23.0 / 30.0, 1.0);
  check("U(0.1,1)", solve_limit(path, u0, one).at(0, 0), 0.6, 1.0);

  log << (failures == 0 ? "selftest passed" : "selftest FAILED: " + std::to_string(failures) + " mismatches")
      << '\n';
  return failures;
}

}  // namespace goupillaud
