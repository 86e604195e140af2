#ifndef SFG_TYPES_HPP
#define SFG_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

// Units used throughout: time in ps, angular frequency in rad/ps,
// chirp (group-delay dispersion) in ps^2, coupling constant gamma in sqrt(ps).
// All downstream math is unit-consistent; nothing else enforces units.

namespace sfg {

using complexd = std::complex<double>;

/// Double-Gaussian joint spectrum of an SPDC photon pair after bandpass
/// filtering: signal bandwidth sigma1, herald bandwidth sigma_h, pump
/// bandwidth S, plus quadratic spectral phase A1 on the signal.
struct PhotonSpec {
  double sigma1 = 1.0;    // signal filter bandwidth [rad/ps]
  double sigma_h = 1.0;   // herald filter bandwidth [rad/ps]
  double S = 1e9;         // pump bandwidth [rad/ps]; very large => separable
  double omega01 = 0.0;   // signal carrier [rad/ps]
  double omega0h = 0.0;   // herald carrier [rad/ps]
  double A1 = 0.0;        // signal chirp [ps^2]
};

/// Strong classical escort pulse: normalized Gaussian spectrum with
/// quadratic spectral phase A2 and a time delay tau relative to the photon.
struct EscortSpec {
  double sigma2 = 1.0;    // bandwidth [rad/ps]
  double omega02 = 0.0;   // carrier [rad/ps]
  double A2 = 0.0;        // chirp [ps^2]
  double tau = 0.0;       // delay [ps]
};

/// The three dimensionless numbers that fix the conversion physics,
/// plus the absolute coupling gamma they were reduced from.
struct DimensionlessParams {
  double p = 0.0;      // scaled coupling constant, >= 0
  double T = 0.0;      // dimensionless time delay
  double q = 1.0;      // escort-to-photon temporal duration ratio, > 0
  double gamma = 0.0;  // absolute coupling [sqrt(ps)], sign kept as given
};

/// Result of a truncated series evaluation.
struct SeriesValue {
  double value = 0.0;
  int terms_used = 1;
  double last_term = 0.0;  // magnitude of the last term added
  bool converged = false;
};

/// Subsystem purity and the Renyi 2-entropy derived from it.
struct PurityResult {
  double purity = 1.0;   // in (0, 1]
  double renyi2 = 0.0;   // = -ln(purity)
  SeriesValue series;    // populated when a series evaluation produced it
};

/// One sample of a two-photon temporal waveform.
struct WaveformSample {
  double t = 0.0;
  double t_h = 0.0;
  complexd amplitude{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Error types

class invalid_parameter : public std::invalid_argument {
 public:
  explicit invalid_parameter(const std::string& msg)
      : std::invalid_argument(msg) {}
};

/// A series hit its term cap before meeting the tolerance. Carries the
/// partial sum accumulated so far.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& msg, SeriesValue partial)
      : std::runtime_error(msg), partial_(partial) {}
  const SeriesValue& partial() const { return partial_; }

 private:
  SeriesValue partial_;
};

/// The four-term efficiency truncation has no interior stationary point in
/// the searched coupling range (expected for large time delays).
class no_peak_error : public std::runtime_error {
 public:
  explicit no_peak_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Time-lens configuration with no finite output chirp.
class afocal_error : public std::runtime_error {
 public:
  explicit afocal_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A sampling grid failed to capture the required energy fraction.
class grid_too_small_error : public std::runtime_error {
 public:
  explicit grid_too_small_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// Fidelity requested where the upconverted population vanishes.
class undefined_fidelity_error : public std::runtime_error {
 public:
  explicit undefined_fidelity_error(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace sfg

#endif  // SFG_TYPES_HPP
