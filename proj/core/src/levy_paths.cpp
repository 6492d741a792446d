#include "goupillaud/levy_paths.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "goupillaud/error.hpp"
#include "goupillaud/random.hpp"
#include "goupillaud/summation.hpp"
#include "goupillaud/text_io.hpp"

namespace goupillaud {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void check_window(const TimeWindow& w) {
  if (!(w.lo <= 0.0 && 0.0 <= w.hi) || !(w.lo < w.hi) || !std::isfinite(w.lo) ||
      !std::isfinite(w.hi))
    throw DomainError(ErrorKind::BadWindow, "time window [" + format_real(w.lo) + ", " +
                                                format_real(w.hi) + "] must contain 0");
}

void check_knots(const IndexWindow& k) {
  if (!(k.lo <= 0 && 0 <= k.hi) || k.lo == k.hi)
    throw DomainError(ErrorKind::BadWindow, "index window [" + std::to_string(k.lo) + ", " +
                                                std::to_string(k.hi) + "] must contain 0");
}

void check_level(int level) {
  if (level < 0 || level > 52)
    throw DomainError(ErrorKind::BadLevel, "level " + std::to_string(level) + " outside [0, 52]");
}

// Reads "key=value" tokens from one header line.
std::map<std::string, std::string> read_header(std::istream& is, const std::string& expected_kind) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError(ErrorKind::BadFormat, "missing header line");
  std::istringstream tokens(line);
  std::map<std::string, std::string> fields;
  std::string tok;
  while (tokens >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw DomainError(ErrorKind::BadFormat, "header token without '=': " + tok);
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  if (fields["kind"] != expected_kind)
    throw DomainError(ErrorKind::BadFormat,
                      "expected kind=" + expected_kind + ", got '" + fields["kind"] + "'");
  return fields;
}

const std::string& field(const std::map<std::string, std::string>& f, const std::string& key) {
  const auto it = f.find(key);
  if (it == f.end()) throw DomainError(ErrorKind::BadFormat, "header lacks '" + key + "'");
  return it->second;
}

}  // namespace

SubordinatorSpec SubordinatorSpec::compound_poisson(double intensity, double jump_size,
                                                    double drift) {
  SubordinatorSpec s;
  s.kind = DriverKind::CompoundPoisson;
  s.intensity = intensity;
  s.jump_size = jump_size;
  s.drift = drift;
  return s;
}

SubordinatorSpec SubordinatorSpec::gamma(double shape, double scale, double drift) {
  SubordinatorSpec s;
  s.kind = DriverKind::Gamma;
  s.shape = shape;
  s.scale = scale;
  s.drift = drift;
  return s;
}

void SubordinatorSpec::validate() const {
  if (!(drift > 0.0) || !std::isfinite(drift))
    throw DomainError(ErrorKind::NonPositiveDrift, "drift must be > 0, got " + format_real(drift));
  if (kind == DriverKind::CompoundPoisson) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
      throw DomainError(ErrorKind::BadParameter, "intensity must be >= 0");
    if (!(jump_size > 0.0) || !std::isfinite(jump_size))
      throw DomainError(ErrorKind::BadParameter, "jump size must be > 0");
  } else {
    if (!(shape > 0.0) || !std::isfinite(shape))
      throw DomainError(ErrorKind::BadParameter, "gamma shape must be > 0");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw DomainError(ErrorKind::BadParameter, "gamma scale must be > 0");
  }
}

IndexWindow knot_window(const TimeWindow& window, int level) {
  check_level(level);
  check_window(window);
  const IndexWindow k{static_cast<std::int64_t>(std::ceil(std::ldexp(window.lo, level))),
                      static_cast<std::int64_t>(std::floor(std::ldexp(window.hi, level)))};
  check_knots(k);
  return k;
}

// ---------------------------------------------------------------------------
// JumpPath

JumpPath::JumpPath(double drift, TimeWindow window, std::vector<Jump> jumps, std::uint64_t seed)
    : drift_(drift), window_(window), jumps_(std::move(jumps)), seed_(seed) {
  if (!(drift_ > 0.0) || !std::isfinite(drift_))
    throw DomainError(ErrorKind::NonPositiveDrift, "drift must be > 0, got " + format_real(drift_));
  check_window(window_);
  times_.reserve(jumps_.size());
  prefix_.reserve(jumps_.size() + 1);
  prefix_.push_back(0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    const Jump& j = jumps_[i];
    if (!window_.contains(j.time))
      throw DomainError(ErrorKind::OutOfWindow, "jump time " + format_real(j.time) + " outside window");
    if (!(j.size > 0.0) || !std::isfinite(j.size))
      throw DomainError(ErrorKind::BadParameter, "jump sizes must be > 0");
    if (i > 0 && !(j.time > jumps_[i - 1].time))
      throw DomainError(ErrorKind::BadParameter, "jump times must be strictly increasing");
    times_.push_back(j.time);
    acc.add(j.size);
    prefix_.push_back(acc.value());
  }
  const auto m0 = std::upper_bound(times_.begin(), times_.end(), 0.0) - times_.begin();
  base_ = prefix_[static_cast<std::size_t>(m0)];
}

void JumpPath::check_time(double t) const {
  if (!window_.contains(t))
    throw DomainError(ErrorKind::OutOfWindow, "time " + format_real(t) + " outside [" +
                                                  format_real(window_.lo) + ", " +
                                                  format_real(window_.hi) + "]");
}

double JumpPath::evaluate(double t) const {
  check_time(t);
  const auto m = std::upper_bound(times_.begin(), times_.end(), t) - times_.begin();
  return drift_ * t + offset(static_cast<std::size_t>(m));
}

double JumpPath::left_limit(double t) const {
  check_time(t);
  const auto m = std::lower_bound(times_.begin(), times_.end(), t) - times_.begin();
  return drift_ * t + offset(static_cast<std::size_t>(m));
}

double JumpPath::jump_at(double t) const {
  const auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it == times_.end() || *it != t) return 0.0;
  return jumps_[static_cast<std::size_t>(it - times_.begin())].size;
}

double JumpPath::generalized_inverse(double x) const {
  const double x_lo = evaluate(window_.lo);
  const double x_hi = evaluate(window_.hi);
  if (!(x >= x_lo && x <= x_hi))
    throw DomainError(ErrorKind::OutOfRange, "value " + format_real(x) + " outside [" +
                                                 format_real(x_lo) + ", " + format_real(x_hi) + "]");
  // Segment m is [T_m, T_{m+1}) with T_0 = lo and T_{n+1} = hi; exactly m
  // jumps lie at or before any of its times.
  const std::size_t n = times_.size();
  auto seg_start = [&](std::size_t m) { return m == 0 ? window_.lo : times_[m - 1]; };
  auto seg_end = [&](std::size_t m) { return m == n ? window_.hi : times_[m]; };
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (drift_ * seg_end(mid) + offset(mid) >= x)
      hi = mid;
    else
      lo = mid + 1;
  }
  const std::size_t m = lo;
  const double start = seg_start(m);
  if (x <= drift_ * start + offset(m)) return start;
  return std::clamp((x - offset(m)) / drift_, start, seg_end(m));
}

// ---------------------------------------------------------------------------
// GridPath

GridPath::GridPath(int level, IndexWindow knots, std::vector<double> increments, std::uint64_t seed)
    : level_(level), knots_(knots), increments_(std::move(increments)), seed_(seed) {
  check_level(level_);
  check_knots(knots_);
  if (static_cast<std::int64_t>(increments_.size()) != knots_.increment_count())
    throw DomainError(ErrorKind::InvalidGrid,
                      "expected " + std::to_string(knots_.increment_count()) + " increments, got " +
                          std::to_string(increments_.size()));
  for (double inc : increments_)
    if (!(inc > 0.0) || !std::isfinite(inc))
      throw DomainError(ErrorKind::InvalidGrid, "increments must be finite and > 0");
}

double GridPath::increment(std::int64_t k) const {
  if (k <= knots_.lo || k > knots_.hi)
    throw DomainError(ErrorKind::OutOfWindow, "increment index " + std::to_string(k) + " outside (" +
                                                  std::to_string(knots_.lo) + ", " +
                                                  std::to_string(knots_.hi) + "]");
  return increments_[static_cast<std::size_t>(k - knots_.lo - 1)];
}

std::vector<double> GridPath::knot_values() const {
  const auto count = static_cast<std::size_t>(knots_.hi - knots_.lo + 1);
  const auto zero = static_cast<std::size_t>(-knots_.lo);
  std::vector<double> values(count, 0.0);
  CompensatedSum up;
  for (std::size_t i = zero + 1; i < count; ++i) {
    up.add(increments_[i - 1]);
    values[i] = up.value();
  }
  CompensatedSum down;
  for (std::size_t i = zero; i > 0; --i) {
    down.add(-increments_[i - 1]);
    values[i - 1] = down.value();
  }
  return values;
}

// ---------------------------------------------------------------------------
// Sampling

JumpPath sample_compound_poisson(const SubordinatorSpec& spec, const TimeWindow& window,
                                 std::uint64_t seed) {
  if (spec.kind != DriverKind::CompoundPoisson)
    throw DomainError(ErrorKind::BadParameter, "sample_compound_poisson needs a compound Poisson spec");
  spec.validate();
  check_window(window);
  std::vector<Jump> jumps;
  if (spec.intensity > 0.0) {
    Xoshiro256 rng(seed);
    double t = window.lo;
    for (;;) {
      const double gap = -std::log(rng.uniform_open0()) / spec.intensity;
      if (gap == 0.0) continue;
      t += gap;
      if (t > window.hi) break;
      if (!jumps.empty() && !(t > jumps.back().time)) continue;
      jumps.push_back({t, spec.jump_size});
    }
  }
  return JumpPath(spec.drift, window, std::move(jumps), seed);
}

GridPath sample_gamma_grid(const SubordinatorSpec& spec, int level, const IndexWindow& knots,
                           std::uint64_t seed) {
  if (spec.kind != DriverKind::Gamma)
    throw DomainError(ErrorKind::BadParameter, "sample_gamma_grid needs a Gamma spec");
  spec.validate();
  check_level(level);
  check_knots(knots);
  const double dt = std::ldexp(1.0, -level);
  const double drift_share = spec.drift * dt;
  std::vector<double> increments;
  increments.reserve(static_cast<std::size_t>(knots.increment_count()));
  for (std::int64_t k = knots.lo + 1; k <= knots.hi; ++k) {
    Xoshiro256 rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
    std::gamma_distribution<double> law(spec.shape * dt, spec.scale);
    increments.push_back(drift_share + law(rng));
  }
  return GridPath(level, knots, std::move(increments), seed);
}

GridPath increments_at_level(const JumpPath& path, int level, const IndexWindow& knots) {
  check_level(level);
  check_knots(knots);
  const double t_lo = grid_time(knots.lo, level);
  const double t_hi = grid_time(knots.hi, level);
  if (!path.window().contains(t_lo) || !path.window().contains(t_hi))
    throw DomainError(ErrorKind::OutOfWindow, "grid times [" + format_real(t_lo) + ", " +
                                                  format_real(t_hi) + "] leave the path window");
  std::vector<double> increments;
  increments.reserve(static_cast<std::size_t>(knots.increment_count()));
  double prev = path.evaluate(t_lo);
  for (std::int64_t k = knots.lo + 1; k <= knots.hi; ++k) {
    const double cur = path.evaluate(grid_time(k, level));
    increments.push_back(cur - prev);
    prev = cur;
  }
  return GridPath(level, knots, std::move(increments), path.seed());
}

GridPath coarsen(const GridPath& grid, int level) {
  if (level < 0 || level > grid.level())
    throw DomainError(ErrorKind::BadLevel, "cannot coarsen level " + std::to_string(grid.level()) +
                                               " to level " + std::to_string(level));
  IndexWindow knots = grid.knots();
  std::vector<double> inc(grid.increments().begin(), grid.increments().end());
  for (int l = grid.level(); l > level; --l) {
    const IndexWindow coarse{ceil_div(knots.lo, 2), floor_div(knots.hi, 2)};
    check_knots(coarse);
    std::vector<double> next;
    next.reserve(static_cast<std::size_t>(coarse.increment_count()));
    for (std::int64_t k = coarse.lo + 1; k <= coarse.hi; ++k) {
      // Children 2k-1 and 2k of coarse increment k.
      const auto left = static_cast<std::size_t>(2 * k - 1 - knots.lo - 1);
      next.push_back(inc[left] + inc[left + 1]);
    }
    knots = coarse;
    inc = std::move(next);
  }
  return GridPath(level, knots, std::move(inc), grid.seed());
}

// ---------------------------------------------------------------------------
// Serialization

void write_jump_path(std::ostream& os, const JumpPath& path) {
  os << "kind=jump_path drift=" << format_real(path.drift())
     << " t_lo=" << format_real(path.window().lo) << " t_hi=" << format_real(path.window().hi)
     << " seed=" << path.seed() << " jumps=" << path.jumps().size() << '\n';
  for (const Jump& j : path.jumps()) os << format_real(j.time) << ' ' << format_real(j.size) << '\n';
}

JumpPath read_jump_path(std::istream& is) {
  const auto f = read_header(is, "jump_path");
  const double drift = parse_real(field(f, "drift"));
  const TimeWindow window{parse_real(field(f, "t_lo")), parse_real(field(f, "t_hi"))};
  const std::uint64_t seed = std::stoull(field(f, "seed"));
  const std::size_t count = std::stoull(field(f, "jumps"));
  std::vector<Jump> jumps;
  jumps.reserve(count);
  std::string t, s;
  while (jumps.size() < count && is >> t >> s) jumps.push_back({parse_real(t), parse_real(s)});
  if (jumps.size() != count)
    throw DomainError(ErrorKind::BadFormat, "expected " + std::to_string(count) + " jump lines");
  return JumpPath(drift, window, std::move(jumps), seed);
}

void write_grid_path(std::ostream& os, const GridPath& grid) {
  os << "kind=grid_path level=" << grid.level() << " k_lo=" << grid.knots().lo
     << " k_hi=" << grid.knots().hi << " seed=" << grid.seed() << '\n';
  for (double inc : grid.increments()) os << format_real(inc) << '\n';
}

GridPath read_grid_path(std::istream& is) {
  const auto f = read_header(is, "grid_path");
  const int level = std::stoi(field(f, "level"));
  const IndexWindow knots{std::stoll(field(f, "k_lo")), std::stoll(field(f, "k_hi"))};
  const std::uint64_t seed = std::stoull(field(f, "seed"));
  if (knots.hi < knots.lo) throw DomainError(ErrorKind::BadFormat, "k_hi < k_lo");
  std::vector<double> inc;
  inc.reserve(static_cast<std::size_t>(knots.increment_count()));
  std::string tok;
  while (static_cast<std::int64_t>(inc.size()) < knots.increment_count() && is >> tok)
    inc.push_back(parse_real(tok));
  return GridPath(level, knots, std::move(inc), seed);
}

}  // namespace goupillaud
