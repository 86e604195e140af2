#ifndef SFG_DESIGN_HPP
#define SFG_DESIGN_HPP

#include "sfg/types.hpp"

namespace sfg::design {

/// Dispersion chain of a single-photon time lens: input chirp A1, escort
/// chirp A2 acting as the lens, output chirp A3, with the induced
/// quadratic temporal phase coefficient B and the resulting magnification.
struct LensDesign {
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double sigma2 = 1.0;
  double B = 0.0;              // temporal phase coefficient [rad/ps^2]
  double magnification = 1.0;  // -A1/A3
  double lcl_ratio = 0.0;      // 16 A2^2 sigma2^4 (large-chirp figure)
};

/// Quadratic temporal phase imparted by a chirped escort:
///   B = -4 A2 sigma2^4 / (1 + 16 A2^2 sigma2^4).
double temporal_phase_coefficient(double A2, double sigma2);

/// Solve the imaging condition 1/(2 A1) + 1/(2 A3) = 2B for the output
/// chirp. Throws afocal_error when 4B approaches 1/A1 (no finite A3;
/// that configuration is the time-to-frequency converter).
LensDesign solve_time_lens(double A1, double A2, double sigma2);

/// Input/output chirp for time-to-frequency conversion: A1 = 1/(4B),
/// which tends to -A2 in the large-chirp limit.
double time_to_frequency_chirp(double A2, double sigma2);

/// First-order bandwidth after compression with equal-and-opposite chirps
/// A1 = -A2 = A: sigma3 = sqrt((sigma1^2+sigma2^2)/(1+16 A^2 sigma1^2 sigma2^2)).
double compressed_bandwidth_first_order(double sigma1, double sigma2,
                                        double A);

}  // namespace sfg::design

#endif  // SFG_DESIGN_HPP
