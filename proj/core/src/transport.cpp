#include "goupillaud/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

#include "goupillaud/error.hpp"
#include "goupillaud/random.hpp"
#include "goupillaud/summation.hpp"
#include "goupillaud/text_io.hpp"

namespace goupillaud {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double z) {
  if (std::fabs(z) < 0.5e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

// Decreasing envelope of |u0^(eta)| for eta > 0.
double transform_envelope(const InitialData& u0, double eta) {
  switch (u0.kind()) {
    case InitialData::Kind::Triangular: {
      const double peak = std::fabs(u0.height()) * u0.width();
      return std::min(peak, 4.0 * std::fabs(u0.height()) / (u0.width() * eta * eta));
    }
    case InitialData::Kind::Gaussian:
      return std::exp(-0.5 * u0.width() * u0.width() * eta * eta);
    case InitialData::Kind::SmoothedStep:
      break;
  }
  throw DomainError(ErrorKind::NoIntegrableTransform, u0.describe() + " has no L1 Fourier transform");
}

void check_field_grid(const EvalGrid& grid) {
  if (grid.x.empty() || grid.t.empty())
    throw DomainError(ErrorKind::GridMismatch, "evaluation grid is empty");
}

}  // namespace

// ---------------------------------------------------------------------------
// Initial data

InitialData::InitialData(Kind kind, double center, double width, double height)
    : kind_(kind), center_(center), width_(width), height_(height) {
  if (!std::isfinite(center_) || !(width_ > 0.0) || !std::isfinite(width_) || !std::isfinite(height_))
    throw DomainError(ErrorKind::BadParameter, "initial data needs finite center/height and width > 0");
}

InitialData InitialData::triangular(double center, double half_width, double height) {
  return InitialData(Kind::Triangular, center, half_width, height);
}

InitialData InitialData::gaussian(double center, double width) {
  return InitialData(Kind::Gaussian, center, width, 1.0 / (width * std::sqrt(kTwoPi)));
}

InitialData InitialData::smoothed_step(double center, double width) {
  return InitialData(Kind::SmoothedStep, center, width, 1.0);
}

std::string InitialData::describe() const {
  switch (kind_) {
    case Kind::Triangular:
      return "triangular(center=" + format_real(center_) + ", half_width=" + format_real(width_) +
             ", height=" + format_real(height_) + ")";
    case Kind::Gaussian:
      return "gaussian(center=" + format_real(center_) + ", width=" + format_real(width_) + ")";
    case Kind::SmoothedStep:
      return "smoothed_step(center=" + format_real(center_) + ", width=" + format_real(width_) + ")";
  }
  return "unknown";
}

double InitialData::operator()(double y) const {
  const double r = (y - center_) / width_;
  switch (kind_) {
    case Kind::Triangular:
      return height_ * std::max(0.0, 1.0 - std::fabs(r));
    case Kind::Gaussian:
      return height_ * std::exp(-0.5 * r * r);
    case Kind::SmoothedStep:
      return 0.5 * (1.0 + std::erf(r));
  }
  return 0.0;
}

double InitialData::min_value() const noexcept {
  return kind_ == Kind::Triangular ? std::min(0.0, height_) : 0.0;
}

double InitialData::max_value() const noexcept {
  return kind_ == Kind::Triangular ? std::max(0.0, height_) : height_;
}

double InitialData::transform_tail_bound(double bandwidth) const {
  if (!(bandwidth > 0.0)) throw DomainError(ErrorKind::BadBandwidth, "bandwidth must be > 0");
  switch (kind_) {
    case Kind::Triangular:
      // 2 * integral_B^inf 4|h| / (w eta^2) d eta, over 2 pi.
      return 4.0 * std::fabs(height_) / (std::numbers::pi * width_ * bandwidth);
    case Kind::Gaussian:
      return std::erfc(width_ * bandwidth / std::numbers::sqrt2) / (width_ * std::sqrt(kTwoPi));
    case Kind::SmoothedStep:
      break;
  }
  throw DomainError(ErrorKind::NoIntegrableTransform, describe() + " has no L1 Fourier transform");
}

std::complex<double> closed_form_transform(const InitialData& u0, double eta) {
  const std::complex<double> phase = std::polar(1.0, -u0.center() * eta);
  switch (u0.kind()) {
    case InitialData::Kind::Triangular: {
      const double s = sinc(0.5 * eta * u0.width());
      return u0.height() * u0.width() * s * s * phase;
    }
    case InitialData::Kind::Gaussian:
      return std::exp(-0.5 * u0.width() * u0.width() * eta * eta) * phase;
    case InitialData::Kind::SmoothedStep:
      break;
  }
  throw DomainError(ErrorKind::NoIntegrableTransform, u0.describe() + " has no L1 Fourier transform");
}

// ---------------------------------------------------------------------------
// Grids and solvers

EvalGrid EvalGrid::midpoint(const Box& box, std::size_t nx, std::size_t nt) {
  if (nx == 0 || nt == 0 || !(box.x_hi > box.x_lo) || !(box.t_hi > box.t_lo))
    throw DomainError(ErrorKind::GridMismatch, "midpoint grid needs a non-empty box and nx, nt > 0");
  EvalGrid g;
  g.cell_dx = (box.x_hi - box.x_lo) / static_cast<double>(nx);
  g.cell_dt = (box.t_hi - box.t_lo) / static_cast<double>(nt);
  g.x.reserve(nx);
  g.t.reserve(nt);
  for (std::size_t i = 0; i < nx; ++i) g.x.push_back(box.x_lo + (static_cast<double>(i) + 0.5) * g.cell_dx);
  for (std::size_t j = 0; j < nt; ++j) g.t.push_back(box.t_lo + (static_cast<double>(j) + 0.5) * g.cell_dt);
  return g;
}

EvalGrid EvalGrid::nodes(std::vector<double> x, std::vector<double> t) {
  EvalGrid g;
  g.x = std::move(x);
  g.t = std::move(t);
  return g;
}

SolutionField solve_discrete(const PiecewiseLinearPath& path, const InitialData& u0,
                             const EvalGrid& grid) {
  check_field_grid(grid);
  SolutionField field{grid, std::vector<double>(grid.x.size() * grid.t.size()),
                      "discrete N=" + std::to_string(path.level())};
  const std::size_t nx = grid.x.size();
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double x = grid.x[ix];
    const double anchor_time = path.inverse(x);
    for (std::size_t it = 0; it < grid.t.size(); ++it) {
      const double t = grid.t[it];
      field.values[it * nx + ix] = u0(t == 0.0 ? x : path.interpolate(anchor_time + (0.0 - t)));
    }
  }
  return field;
}

SolutionField solve_limit(const JumpPath& path, const InitialData& u0, const EvalGrid& grid) {
  check_field_grid(grid);
  SolutionField field{grid, std::vector<double>(grid.x.size() * grid.t.size()), "limit"};
  const std::size_t nx = grid.x.size();
  for (std::size_t ix = 0; ix < nx; ++ix) {
    const double anchor_time = path.generalized_inverse(grid.x[ix]);
    for (std::size_t it = 0; it < grid.t.size(); ++it)
      field.values[it * nx + ix] = u0(path.evaluate(anchor_time + (0.0 - grid.t[it])));
  }
  return field;
}

double lp_error(const SolutionField& a, const SolutionField& b, double p, const Box& box) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError(ErrorKind::BadExponent, "p must be finite and >= 1, got " + format_real(p));
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    throw DomainError(ErrorKind::GridMismatch, "fields are sampled on different grids");
  const EvalGrid& g = a.grid;
  if (!g.has_cells())
    throw DomainError(ErrorKind::GridMismatch, "L^p integrals need a midpoint grid");
  const double half_dx = 0.5 * g.cell_dx;
  const double half_dt = 0.5 * g.cell_dt;
  if (box.x_lo < g.x.front() - half_dx * 1.000001 || box.x_hi > g.x.back() + half_dx * 1.000001 ||
      box.t_lo < g.t.front() - half_dt * 1.000001 || box.t_hi > g.t.back() + half_dt * 1.000001)
    throw DomainError(ErrorKind::GridMismatch, "box K exceeds the grid span");

  const std::size_t nx = g.x.size();
  std::vector<double> rows;
  rows.reserve(g.t.size());
  std::vector<double> row;
  for (std::size_t it = 0; it < g.t.size(); ++it) {
    if (g.t[it] < box.t_lo || g.t[it] > box.t_hi) continue;
    row.clear();
    for (std::size_t ix = 0; ix < nx; ++ix) {
      if (g.x[ix] < box.x_lo || g.x[ix] > box.x_hi) continue;
      const double d = std::fabs(a.values[it * nx + ix] - b.values[it * nx + ix]);
      row.push_back(p == 1.0 ? d : std::pow(d, p));
    }
    rows.push_back(pairwise_sum(row));
  }
  return std::pow(pairwise_sum(rows) * g.cell_dx * g.cell_dt, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Fourier integral operator

FioResult fio_evaluate(double g, const InitialData& u0, double bandwidth, std::size_t steps) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw DomainError(ErrorKind::BadBandwidth, "bandwidth must be finite and > 0");
  if (steps < 2) throw DomainError(ErrorKind::BadSteps, "need at least 2 quadrature nodes");
  if (!u0.has_integrable_transform())
    throw DomainError(ErrorKind::NoIntegrableTransform, u0.describe() + " has no L1 Fourier transform");
  const double h = 2.0 * bandwidth / static_cast<double>(steps - 1);
  CompensatedSum re;
  CompensatedSum im;
  for (std::size_t j = 0; j < steps; ++j) {
    const double eta = -bandwidth + static_cast<double>(j) * h;
    const double w = (j == 0 || j + 1 == steps) ? 0.5 : 1.0;
    const std::complex<double> term = closed_form_transform(u0, eta) * std::polar(1.0, g * eta);
    re.add(w * term.real());
    im.add(w * term.imag());
  }
  const double scale = h / kTwoPi;
  return {re.value() * scale, im.value() * scale};
}

double fio_tolerance(const InitialData& u0, double g, double bandwidth, std::size_t steps) {
  if (steps < 2) throw DomainError(ErrorKind::BadSteps, "need at least 2 quadrature nodes");
  const double h = 2.0 * bandwidth / static_cast<double>(steps - 1);
  const double tail = u0.transform_tail_bound(bandwidth);
  // Nodes beyond B that the discrete sum omits, plus the half-weighted ends.
  const double edge = h * transform_envelope(u0, bandwidth) / std::numbers::pi;
  // The infinite trapezoid sum reproduces u0(g) plus its images at g + 2 pi m / h.
  const double period = kTwoPi / h;
  double alias = 0.0;
  for (int m = 1; m <= 4; ++m)
    alias += std::fabs(u0(g + m * period)) + std::fabs(u0(g - m * period));
  const double peak = transform_envelope(u0, 0.0);
  const double rounding = 4.0 * static_cast<double>(steps) * std::numeric_limits<double>::epsilon() *
                          h * peak / kTwoPi * (1.0 + std::fabs(g) * bandwidth);
  return tail + edge + alias + rounding;
}

// ---------------------------------------------------------------------------
// Monte Carlo convergence

TimeWindow characteristic_window(const Box& box, double drift, double margin) {
  if (!(drift > 0.0)) throw DomainError(ErrorKind::NonPositiveDrift, "drift must be > 0");
  // X*(x) lies between min(x, 0)/d and max(x, 0)/d; the shift subtracts t.
  const double lo = std::min(0.0, std::min(box.x_lo, 0.0) / drift - box.t_hi);
  const double hi = std::max(0.0, std::max(box.x_hi, 0.0) / drift - box.t_lo);
  return {std::floor(lo - margin), std::ceil(hi + margin)};
}

namespace {

// errors[exponent][level] for one replica.
using ReplicaErrors = std::vector<std::vector<double>>;

ReplicaErrors run_replica(const SubordinatorSpec& spec, const InitialData& u0,
                          const McOptions& opt, const EvalGrid& grid, const TimeWindow& window,
                          std::uint64_t seed) {
  std::vector<SolutionField> discrete;
  discrete.reserve(opt.levels.size());
  SolutionField limit;
  if (spec.kind == DriverKind::CompoundPoisson) {
    const JumpPath path = sample_compound_poisson(spec, window, seed);
    limit = solve_limit(path, u0, grid);
    for (int n : opt.levels)
      discrete.push_back(solve_discrete(PiecewiseLinearPath::from_path(path, n), u0, grid));
  } else {
    const GridPath fine =
        sample_gamma_grid(spec, opt.reference_level, knot_window(window, opt.reference_level), seed);
    limit = solve_discrete(PiecewiseLinearPath::from_grid(fine), u0, grid);
    for (int n : opt.levels)
      discrete.push_back(solve_discrete(PiecewiseLinearPath::from_grid(coarsen(fine, n)), u0, grid));
  }
  ReplicaErrors errors(opt.exponents.size(), std::vector<double>(opt.levels.size()));
  for (std::size_t ip = 0; ip < opt.exponents.size(); ++ip)
    for (std::size_t il = 0; il < opt.levels.size(); ++il)
      errors[ip][il] = lp_error(discrete[il], limit, opt.exponents[ip], opt.box);
  return errors;
}

}  // namespace

std::vector<ErrorReport> mc_expected_error(const SubordinatorSpec& spec, const InitialData& u0,
                                           const McOptions& opt) {
  spec.validate();
  if (opt.replicas < 2) throw DomainError(ErrorKind::BadParameter, "need at least 2 replicas");
  if (opt.levels.empty()) throw DomainError(ErrorKind::BadLevel, "no refinement levels given");
  for (double p : opt.exponents)
    if (!(p >= 1.0) || !std::isfinite(p))
      throw DomainError(ErrorKind::BadExponent, "p must be finite and >= 1");
  for (int n : opt.levels) {
    if (n < 0) throw DomainError(ErrorKind::BadLevel, "negative level");
    if (spec.kind == DriverKind::Gamma && n >= opt.reference_level)
      throw DomainError(ErrorKind::BadLevel, "Gamma levels must stay below the reference level " +
                                                 std::to_string(opt.reference_level));
  }

  const EvalGrid grid = EvalGrid::midpoint(opt.box, opt.nx, opt.nt);
  const TimeWindow window = characteristic_window(opt.box, spec.drift, opt.window_margin);

  struct Outcome {
    ReplicaErrors errors;
    std::string failure;
    std::exception_ptr fatal;
  };
  std::vector<Outcome> outcomes(opt.replicas);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < opt.replicas; r = next++) {
      try {
        outcomes[r].errors = run_replica(spec, u0, opt, grid, window, stream_seed(opt.master_seed, r));
      } catch (const DomainError& e) {
        if (e.kind() == ErrorKind::OutOfWindow || e.kind() == ErrorKind::OutOfRange)
          outcomes[r].failure = e.what();
        else
          outcomes[r].fatal = std::current_exception();
      } catch (...) {
        outcomes[r].fatal = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(opt.replicas)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (const Outcome& o : outcomes)
    if (o.fatal) std::rethrow_exception(o.fatal);

  std::vector<ErrorReport> reports(opt.exponents.size());
  std::vector<std::size_t> ok;
  std::vector<ReplicaFailure> failures;
  for (std::size_t r = 0; r < opt.replicas; ++r) {
    if (outcomes[r].failure.empty())
      ok.push_back(r);
    else
      failures.push_back({r, outcomes[r].failure});
  }
  if (ok.size() < 2)
    throw DomainError(ErrorKind::InsufficientWindow,
                      std::to_string(failures.size()) + " of " + std::to_string(opt.replicas) +
                          " replicas left the simulation window");

  const double count = static_cast<double>(ok.size());
  std::vector<double> sample(ok.size());
  for (std::size_t ip = 0; ip < opt.exponents.size(); ++ip) {
    ErrorReport& rep = reports[ip];
    rep.p = opt.exponents[ip];
    rep.replicas = ok.size();
    rep.surrogate = spec.kind == DriverKind::Gamma;
    rep.reference_level = rep.surrogate ? opt.reference_level : 0;
    rep.failures = failures;
    for (std::size_t il = 0; il < opt.levels.size(); ++il) {
      for (std::size_t i = 0; i < ok.size(); ++i) sample[i] = outcomes[ok[i]].errors[ip][il];
      const double mean = pairwise_sum(sample) / count;
      std::vector<double> sq(sample.size());
      for (std::size_t i = 0; i < sample.size(); ++i) sq[i] = (sample[i] - mean) * (sample[i] - mean);
      const double var = pairwise_sum(sq) / (count - 1.0);
      rep.levels.push_back({opt.levels[il], mean, std::sqrt(var / count)});
    }
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Output

void write_solution(std::ostream& os, const SolutionField& field) {
  os << 't';
  for (double t : field.grid.t) os << ',' << format_real(t);
  os << '\n';
  const std::size_t nx = field.grid.x.size();
  for (std::size_t ix = 0; ix < nx; ++ix) {
    os << format_real(field.grid.x[ix]);
    for (std::size_t it = 0; it < field.grid.t.size(); ++it) os << ',' << format_real(field.at(it, ix));
    os << '\n';
  }
}

void write_error_report(std::ostream& os, const std::vector<ErrorReport>& reports) {
  os << "N,mean,stderr,R,p\n";
  for (const ErrorReport& rep : reports) {
    os << "# p=" << format_real(rep.p) << " limit="
       << (rep.surrogate ? "surrogate(N_ref=" + std::to_string(rep.reference_level) + ")" : std::string("exact"))
       << '\n';
    for (const ReplicaFailure& f : rep.failures)
      os << "# replica " << f.replica << " failed: " << f.message << '\n';
    for (const LevelStat& s : rep.levels)
      os << s.level << ',' << format_real(s.mean) << ',' << format_real(s.std_error) << ','
         << rep.replicas << ',' << format_real(rep.p) << '\n';
  }
}

}  // namespace goupillaud
