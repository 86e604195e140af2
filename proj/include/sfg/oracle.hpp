#ifndef SFG_ORACLE_HPP
#define SFG_ORACLE_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sfg/model.hpp"
#include "sfg/types.hpp"

namespace sfg::oracle {

/// Uniform sampling axis with a power-of-two point count. The frequency
/// axis dual to a time axis satisfies d_omega = 2 pi / (n dt) exactly.
struct Axis {
  double start = 0.0;
  double step = 1.0;
  int n = 64;

  double at(int i) const { return start + step * i; }
  double center() const { return start + step * (n / 2); }
};

void validate(const Axis& axis);
bool same_axis(const Axis& a, const Axis& b, double rel_tol = 1e-12);

/// Axis of n points with spacing 2*half_span/n, FFT-style layout
/// (center sits at index n/2).
Axis symmetric_axis(double center, double half_span, int n);

/// Exact FFT dual of an axis, centered at `center`.
Axis dual_axis(const Axis& axis, double center = 0.0);

enum class Domain { time, frequency };

/// Discretized two-photon amplitude over (t, t_h) or (omega, omega_h).
/// data(i, j): i runs along the signal axis, j along the herald axis.
struct JointGrid {
  Axis axis_a;
  Axis axis_h;
  Domain domain = Domain::time;
  Eigen::MatrixXcd data;
};

/// Discretized escort amplitude.
struct EscortGrid {
  Axis axis;
  Domain domain = Domain::time;
  Eigen::VectorXcd data;
};

double grid_norm(const JointGrid& grid);   // trapezoidal integral of |data|^2
double grid_norm(const EscortGrid& grid);

// --- Fourier transforms (photon-number preserving convention) ---------------
// Forward maps time to frequency with kernel e^{-i omega t}/sqrt(2 pi);
// inverse maps frequency to time with kernel e^{+i omega t}/sqrt(2 pi).
// Axis offsets are handled with pre/post phase corrections, so
// ft_inverse(ft_forward(x)) reproduces x exactly for matching centers.

JointGrid ft_forward(const JointGrid& grid, double center_a = 0.0,
                     double center_h = 0.0);
JointGrid ft_inverse(const JointGrid& grid, double center_a = 0.0,
                     double center_h = 0.0);
EscortGrid ft_forward(const EscortGrid& grid, double center = 0.0);
EscortGrid ft_inverse(const EscortGrid& grid, double center = 0.0);

// --- sampling ----------------------------------------------------------------

/// Sample the double-Gaussian joint spectrum on frequency axes. Throws
/// grid_too_small_error when the grid misses more than the energy budget.
JointGrid sample_input(const PhotonSpec& photon, const Axis& freq_a,
                       const Axis& freq_h);

/// Sample the escort spectrum on a frequency axis, with the same checks.
EscortGrid sample_escort(const EscortSpec& escort, const Axis& freq);

/// Convenience pipelines: sample in frequency on the dual axes and
/// transform to the requested time axes.
JointGrid input_time_grid(const PhotonSpec& photon, const Axis& time_a,
                          const Axis& time_h);
EscortGrid escort_time_grid(const EscortSpec& escort, const Axis& time);

/// Default axes per the standard recipe: span = +-10 stretched temporal
/// widths of the wider of photon and escort (plus the delay), n = 2048.
std::pair<Axis, Axis> default_axes(const PhotonSpec& photon,
                                   const EscortSpec& escort, int n_a = 2048,
                                   int n_h = 2048, double width_factor = 10.0);

// --- conversion ---------------------------------------------------------------

/// Iterated time-domain recursion
///   f^{(k+2)} = -2 pi gamma^2 / ((k+1)(k+2)) f^{(k)} |g|^2,
/// base cases f^{(0)} = f0 and f^{(1)} = i sqrt(2 pi) gamma f0 g, summed
/// into the remaining (even orders) and upconverted (odd orders) grids up
/// to order K.
std::pair<JointGrid, JointGrid> recursion_upconvert(const JointGrid& f0,
                                                    const EscortGrid& g,
                                                    double gamma, int K);

/// Recursion depth sufficient for the sine series at this coupling.
int recursion_depth(const EscortGrid& g, double gamma);

/// Closed-form conversion applied samplewise to the same inputs:
/// remaining = f0 cos(x), upconverted = i f0 (g/|g|) sin(x) with
/// x = sqrt(2 pi) gamma |g|.
std::pair<JointGrid, JointGrid> closed_form_upconvert(const JointGrid& f0,
                                                      const EscortGrid& g,
                                                      double gamma);

// --- grid metrics -------------------------------------------------------------

/// Trapezoidal integral of |data|^2 (the mode population on the grid).
double grid_efficiency(const JointGrid& f3);

/// Purity of either subsystem: sum of fourth powers of the normalized
/// singular values of the amplitude matrix (via its Gram matrix).
double grid_purity(const JointGrid& grid);

/// Same quantity from the raw four-fold discretized integral; O(n^2 m^2),
/// intended for small grids as an independent check of grid_purity.
double grid_purity_quartic(const JointGrid& grid);

/// Normalized Schmidt coefficients (descending), from the Gram spectrum.
Eigen::VectorXd schmidt_coefficients(const JointGrid& grid);

/// Relative L2 distance ||a - b|| / ||b|| between two grids on equal axes.
double relative_l2(const JointGrid& a, const JointGrid& b);

/// |<a|b>|^2 / (<a|a><b|b>) with trapezoidal inner products.
double grid_fidelity(const JointGrid& a, const JointGrid& b);

/// Marginal spectral intensity of the signal mode of a time-domain grid:
/// transform the signal axis, integrate |.|^2 over the herald time.
std::pair<Axis, Eigen::VectorXd> signal_spectral_marginal(
    const JointGrid& time_grid, double center = 0.0);

/// Marginal temporal intensity along the signal axis.
std::pair<Axis, Eigen::VectorXd> signal_temporal_marginal(
    const JointGrid& time_grid);

/// Root of the second central moment of a sampled intensity profile.
double effective_width(const Axis& axis, const Eigen::VectorXd& intensity);

/// Multiply the signal-mode spectrum by e^{+i A3 (omega - center)^2}
/// (a dispersive element applied after conversion); time domain in and out.
JointGrid apply_spectral_chirp(const JointGrid& time_grid, double A3,
                               double center = 0.0);

/// CSV snapshot: '#' header with the axes, then rows "a,h,re,im".
void write_grid_csv(const JointGrid& grid, const std::string& path);

}  // namespace sfg::oracle

#endif  // SFG_ORACLE_HPP
