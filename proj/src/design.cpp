#include "sfg/design.hpp"

#include <cmath>
#include <string>

namespace sfg::design {

double temporal_phase_coefficient(double A2, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(A2))
    throw invalid_parameter(
        "temporal_phase_coefficient: sigma2 > 0 and finite A2 required");
  const double s2sq = sigma2 * sigma2;
  const double u = 4.0 * A2 * s2sq;
  return -u * s2sq / (1.0 + u * u);
}

LensDesign solve_time_lens(double A1, double A2, double sigma2) {
  if (A1 == 0.0 || !std::isfinite(A1))
    throw invalid_parameter("solve_time_lens: A1 must be nonzero and finite");
  LensDesign out;
  out.A1 = A1;
  out.A2 = A2;
  out.sigma2 = sigma2;
  out.B = temporal_phase_coefficient(A2, sigma2);
  const double u = 4.0 * A2 * sigma2 * sigma2;
  out.lcl_ratio = u * u;
  const double denom = 4.0 * out.B - 1.0 / A1;
  if (std::abs(denom) < 1e-12)
    throw afocal_error(
        "solve_time_lens: afocal configuration (4B = 1/A1); this chirp pair "
        "realizes a time-to-frequency converter, not an imaging lens");
  out.A3 = 1.0 / denom;
  out.magnification = -A1 / out.A3;
  return out;
}

double time_to_frequency_chirp(double A2, double sigma2) {
  const double B = temporal_phase_coefficient(A2, sigma2);
  if (B == 0.0)
    throw invalid_parameter(
        "time_to_frequency_chirp: A2 = 0 gives no temporal phase (B = 0)");
  return 1.0 / (4.0 * B);
}

double compressed_bandwidth_first_order(double sigma1, double sigma2,
                                        double A) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(A))
    throw invalid_parameter(
        "compressed_bandwidth_first_order: bandwidths must be positive");
  const double s1sq = sigma1 * sigma1, s2sq = sigma2 * sigma2;
  return std::sqrt((s1sq + s2sq) / (1.0 + 16.0 * A * A * s1sq * s2sq));
}

}  // namespace sfg::design
