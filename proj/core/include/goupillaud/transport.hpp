#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "goupillaud/dyadic_medium.hpp"
#include "goupillaud/levy_paths.hpp"

namespace goupillaud {

/// Compact region K = [x_lo, x_hi] x [t_lo, t_hi] of the (x, t) plane.
struct Box {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double t_lo = 0.0;
  double t_hi = 1.0;

  double area() const noexcept { return (x_hi - x_lo) * (t_hi - t_lo); }
};

/// Initial profile u0 with closed-form values and Fourier transform
/// u0^(eta) = integral of exp(-i y eta) u0(y) dy.
///
///   Triangular(a, w, h):  h * max(0, 1 - |y - a| / w)
///   Gaussian(c, s):       exp(-(y - c)^2 / (2 s^2)) / (s sqrt(2 pi))
///   SmoothedStep(c, s):   (1 + erf((y - c) / s)) / 2   (no L1 transform)
class InitialData {
 public:
  enum class Kind { Triangular, Gaussian, SmoothedStep };

  static InitialData triangular(double center = 0.0, double half_width = 1.0, double height = 1.0);
  static InitialData gaussian(double center, double width);
  static InitialData smoothed_step(double center, double width);

  Kind kind() const noexcept { return kind_; }
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  double height() const noexcept { return height_; }
  std::string describe() const;

  double operator()(double y) const;
  double min_value() const noexcept;
  double max_value() const noexcept;

  bool has_integrable_transform() const noexcept { return kind_ != Kind::SmoothedStep; }
  /// Upper bound on (1/2pi) * integral over |eta| > B of |u0^(eta)|.
  double transform_tail_bound(double bandwidth) const;

 private:
  InitialData(Kind kind, double center, double width, double height);

  Kind kind_;
  double center_;
  double width_;
  double height_;
};

/// Throws NoIntegrableTransform for SmoothedStep.
std::complex<double> closed_form_transform(const InitialData& u0, double eta);

/// Sample points of a solution. Midpoint grids also carry their cell size
/// so that L^p integrals can be formed over them.
struct EvalGrid {
  std::vector<double> x;
  std::vector<double> t;
  double cell_dx = 0.0;
  double cell_dt = 0.0;

  static EvalGrid midpoint(const Box& box, std::size_t nx, std::size_t nt);
  static EvalGrid nodes(std::vector<double> x, std::vector<double> t);
  bool has_cells() const noexcept { return cell_dx > 0.0 && cell_dt > 0.0; }
  bool operator==(const EvalGrid&) const = default;
};

struct SolutionField {
  EvalGrid grid;
  std::vector<double> values;  // values[it * grid.x.size() + ix]
  std::string provenance;

  double at(std::size_t it, std::size_t ix) const { return values[it * grid.x.size() + ix]; }
};

/// U^(N)(t, x) = u0(gamma^(N)(0; x, t)) at every grid node.
SolutionField solve_discrete(const PiecewiseLinearPath& path, const InitialData& u0,
                             const EvalGrid& grid);
/// U(t, x) = u0(Gamma(0; x, t)) at every grid node.
SolutionField solve_limit(const JumpPath& path, const InitialData& u0, const EvalGrid& grid);

/// Midpoint-rule L^p distance over the cells of a shared midpoint grid whose
/// centres lie in K.
double lp_error(const SolutionField& a, const SolutionField& b, double p, const Box& box);

struct FioResult {
  double value;
  double imag_residue;
};

/// (1/2pi) * trapezoid rule with `steps` nodes on [-B, B] of
/// exp(i g eta) u0^(eta); the y-integral is taken in closed form.
FioResult fio_evaluate(double g, const InitialData& u0, double bandwidth, std::size_t steps);

/// Error bound for fio_evaluate: transform tail beyond B, aliasing images of
/// the trapezoid rule at spacing 2pi/h, and accumulated rounding.
double fio_tolerance(const InitialData& u0, double g, double bandwidth, std::size_t steps);

struct LevelStat {
  int level;
  double mean;
  double std_error;
};

struct ReplicaFailure {
  std::size_t replica;
  std::string message;
};

struct ErrorReport {
  double p = 1.0;
  std::size_t replicas = 0;  // replicas that completed
  bool surrogate = false;    // limit is the finest-level grid, not an exact path
  int reference_level = 0;   // surrogate level when `surrogate`
  std::vector<LevelStat> levels;
  std::vector<ReplicaFailure> failures;
};

struct McOptions {
  Box box{0.0, 4.0, 0.0, 2.0};
  std::size_t nx = 512;
  std::size_t nt = 257;
  std::vector<double> exponents{1.0, 2.0};
  std::vector<int> levels{2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t replicas = 64;
  std::uint64_t master_seed = 0;
  int reference_level = 14;  // Gamma surrogate level
  unsigned workers = 1;
  double window_margin = 1.0;
};

/// Time window large enough for every characteristic shift needed on the box:
/// integer-aligned and widened by `margin` on both sides.
TimeWindow characteristic_window(const Box& box, double drift, double margin);

/// E ||U^(N) - U||_{L^p(K)} estimated over independent replicas; replica r
/// uses stream_seed(master_seed, r). One report per exponent.
std::vector<ErrorReport> mc_expected_error(const SubordinatorSpec& spec, const InitialData& u0,
                                           const McOptions& options);

/// Header "t,t1,t2,..." then rows "x,U(t1,x),U(t2,x),...".
void write_solution(std::ostream& os, const SolutionField& field);
/// Rows "N,mean,stderr,R,p"; surrogate reports are labelled in a comment line.
void write_error_report(std::ostream& os, const std::vector<ErrorReport>& reports);

}  // namespace goupillaud
