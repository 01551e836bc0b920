#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace fsc {

/// Piecewise test function: sin(8*pi*x) on [-2, 0), sin(pi*x) on [0, 2],
/// with analytic derivatives. The branch boundary x = 0 belongs to the
/// low-frequency piece.
struct FsinJet {
  double value, d1, d2, d3;
};
FsinJet f_sin_eval(double x);

/// Composite Simpson quadrature (panels is rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

/// Integral of |f^(order)|^2 over [a, b]. Derivatives are taken from the
/// supplied callables when given, otherwise by dense central differences of
/// the value callable.
struct Field1D {
  std::function<double(double)> f;
  std::function<double(double)> d1;  // optional
  std::function<double(double)> d2;  // optional
};
double integrate_sq_derivative(const Field1D& field, int order, double a, double b,
                               int panels = 100000);

/// Truncated Fourier series on [-pi, pi]: a0/2 + sum a_n cos(nx) + b_n sin(nx).
struct BandlimitedCoeffs {
  double a0 = 0.0;
  std::vector<double> a, b;  // index 0 holds n = 1
};

struct IdentityPair {
  double quadrature = 0.0;
  double closed_form = 0.0;
};

/// Quadrature of int |f'|^2 and int |f''|^2 against the closed forms
/// pi * sum n^2 (a_n^2 + b_n^2) and pi * sum n^4 (a_n^2 + b_n^2).
std::pair<IdentityPair, IdentityPair> bandlimited_identities(const BandlimitedCoeffs& c,
                                                             int panels = 100000);

/// Real field sampled on a uniform grid over a box (1-d or 2-d). The grid
/// uses the periodic convention: points lo + i*h with the right endpoint
/// excluded.
struct SampledField {
  int dim = 1;
  Eigen::VectorXd lo, hi;
  std::vector<int> shape;
  std::vector<double> values;  // row-major for dim == 2

  double spacing(int axis) const { return (hi(axis) - lo(axis)) / shape[axis]; }
  double cell_volume() const;

  static SampledField sample_1d(const std::function<double(double)>& f, double lo, double hi,
                                int n);
  static SampledField sample_2d(const std::function<double(double, double)>& f, double lo,
                                double hi, int n_per_axis);
};

/// Discrete local Fourier data: the field windowed by the ball indicator,
/// transformed with rectangular-rule scaling (coefficient = DFT * cell
/// volume), and normalized into the local frequency distribution.
struct LocalSpectrum {
  int dim = 1;
  std::vector<int> shape;
  std::vector<double> power;              // |f_hat(k)|^2 per bin
  std::vector<std::vector<double>> freq;  // per-axis frequencies, cycles/unit
  Eigen::VectorXd center;
  double radius = 1.0;
  double energy_spatial = 0.0;   // int_B f^2
  double energy_spectral = 0.0;  // sum |f_hat|^2 dk
  double parseval_rel_error = 0.0;
  double freq_cell_volume = 0.0;

  /// sum pi(k) |k|^p dk, the p-th frequency moment of the distribution.
  double moment(int p) const;
  /// Cell-volume-weighted sum of pi(k); equals 1 by construction.
  double pi_sum() const;
  /// |k| of the highest-power bin.
  double peak_frequency() const;
};

/// Throws std::invalid_argument when the ball is not contained in the box
/// and std::runtime_error("zero energy") for an identically-zero window.
LocalSpectrum local_fourier(const SampledField& field, const Eigen::VectorXd& center,
                            double radius = 1.0);

struct ConnectionResult {
  double lhs = 0.0;   // int_B |grad f|^2 (order 1) or int_B |H_f|_F^2 (order 2)
  double rhs = 0.0;   // (2 pi)^(2 order) * energy * moment(2 order)
  double ratio = 0.0;
};

/// Numerical check of the first/second-order connections. deriv_sq returns
/// |grad f(y)|^2 (order 1) or |H_f(y)|^2_F (order 2) at a point; when absent
/// it is approximated by central differences on the sampled grid.
ConnectionResult check_connection(const SampledField& field, const Eigen::VectorXd& center,
                                  int order,
                                  const std::function<double(const Eigen::VectorXd&)>& deriv_sq = {},
                                  double radius = 1.0);

struct UncertaintyResult {
  double dispersion = 0.0;       // int (y-x)^2 f_x^2 / E
  double gradient_energy = 0.0;  // int_B f'^2 / E
  double product = 0.0;
  double bound = 0.245;  // 1/4 with 2% discretization tolerance
};

/// Energy-normalized 1-d uncertainty product over the unit ball at x.
UncertaintyResult uncertainty_check(const std::function<double(double)>& f,
                                    const std::function<double(double)>& df, double center,
                                    int panels = 1 << 16);

}  // namespace fsc
