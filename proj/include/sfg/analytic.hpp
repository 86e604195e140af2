#ifndef SFG_ANALYTIC_HPP
#define SFG_ANALYTIC_HPP

#include "sfg/model.hpp"
#include "sfg/types.hpp"

namespace sfg::analytic {

/// Closed-form chirped-Gaussian escort pulse in the time domain,
///   g(t) = (2 sigma2^2/pi)^{1/4} zeta2^{-1/2}
///          exp(i omega02 (t+tau)) exp(-sigma2^2 (t+tau)^2 / zeta2),
/// with zeta2 = 1 - 4 i A2 sigma2^2. Magnitude and phase are exposed
/// separately so the unit phase factor g/|g| never involves a quotient.
class EscortField {
 public:
  explicit EscortField(const EscortSpec& spec);

  double magnitude(double t) const;
  double phase(double t) const;
  complexd amplitude(double t) const;

  double peak() const { return peak_; }              // |g(-tau)|
  double abs_zeta_sq() const { return z2sq_; }       // 1 + 16 A2^2 sigma2^4
  double chirp_rate() const { return chirp_rate_; }  // t^2 phase coefficient
  const EscortSpec& spec() const { return spec_; }

 private:
  EscortSpec spec_;
  double z2sq_;
  double peak_;
  double decay_;       // sigma2^2 / |zeta2|^2
  double chirp_rate_;  // -4 A2 sigma2^4 / |zeta2|^2
  double phase0_;      // arg(zeta2^{-1/2})
};

complexd escort_time(const EscortSpec& spec, double t);

/// Joint temporal amplitude of the input photon pair, evaluated from the
/// complex quadratic form of its double-Gaussian spectrum:
///   f(t, t_h) = pref * exp(-(a_tt t^2 + a_hh t_h^2 - a_th t t_h))
///             * exp(i(omega01 t + omega0h t_h)).
class JointInput {
 public:
  explicit JointInput(const PhotonSpec& spec);
  complexd operator()(double t, double t_h) const;
  const PhotonSpec& spec() const { return spec_; }

 private:
  PhotonSpec spec_;
  complexd pref_, a_tt_, a_hh_, a_th_;
};

complexd joint_input_time(const PhotonSpec& spec, double t, double t_h);

/// Evaluates the post-conversion two-photon waveforms. With
/// x(t) = sqrt(2 pi) gamma |g(t)|:
///   remaining   : f(t,t_h) cos(x)
///   upconverted : i f(t,t_h) e^{i arg g(t)} sin(x)
///   first_order : i sqrt(2 pi) gamma f(t,t_h) g(t)
class WaveformEvaluator {
 public:
  WaveformEvaluator(const PhotonSpec& photon, const EscortSpec& escort,
                    double gamma);

  complexd input(double t, double t_h) const { return joint_(t, t_h); }
  complexd remaining(double t, double t_h) const;
  complexd upconverted(double t, double t_h) const;
  complexd first_order(double t, double t_h) const;

  const EscortField& escort() const { return escort_; }
  const JointInput& joint() const { return joint_; }
  double gamma() const { return gamma_; }

 private:
  JointInput joint_;
  EscortField escort_;
  double gamma_;
  double coupling_;  // sqrt(2 pi) gamma
};

complexd remaining_waveform(const PhotonSpec&, const EscortSpec&, double gamma,
                            double t, double t_h);
complexd upconverted_waveform(const PhotonSpec&, const EscortSpec&,
                              double gamma, double t, double t_h);
complexd upconverted_first_order(const PhotonSpec&, const EscortSpec&,
                                 double gamma, double t, double t_h);

/// Conversion efficiency <n3> as the alternating series
///   1/2 sum_{k>=1} (-1)^{k-1}/(2k)! exp(-k T^2/(1+qk))/sqrt(1+qk) p^{2k},
/// summed with compensated accumulation until the terms stay below
/// tol * |partial| for three consecutive k. Above p = 30 the series loses
/// precision to cancellation and the evaluation switches to the
/// equivalent one-dimensional quadrature (terms_used reports 1 there).
SeriesValue efficiency(const DimensionlessParams& params, double tol = 1e-12);

/// Monochromatic-escort limit sin^2(e^{-T^2/2} p / 2).
double efficiency_low_q(double p, double T);

/// Independent quadrature route for the efficiency: the dimensionless
/// overlap integral of the photon's temporal marginal with the sin^2
/// conversion profile of the stretched escort.
double efficiency_quadrature(double p, double q, double T,
                             double abs_tol = 1e-11);

/// Scaled coupling at the first efficiency peak, estimated from the
/// four-term truncation of the efficiency series (first positive root of
/// its derivative, located by bracketing and bisection). Throws
/// no_peak_error if the truncation has no root below p_max, which happens
/// for large |T|.
double optimal_p_estimate(double q, double T, double p_max = 25.0);

struct OptimalPoint {
  double p = 0.0;
  double efficiency = 0.0;
};

/// Maximum of the full efficiency series, golden-section refined from a
/// scan seeded at the four-term estimate (dense scan of (0, p_max] when
/// the estimate reports no peak).
OptimalPoint optimal_p_refined(double q, double T, double p_max = 25.0);

/// Overlap fidelity between the full upconverted waveform and its
/// first-order form, evaluated with adaptive 2-D quadrature over the
/// closed-form amplitudes. Throws undefined_fidelity_error when the
/// upconverted population is below 1e-12.
double fidelity_first_order(const PhotonSpec& photon, const EscortSpec& escort,
                            double gamma);

/// Purity of either subsystem of the input pair,
///   S sqrt(S^2+sigma1^2+sigma_h^2) / (sqrt(S^2+sigma1^2) sqrt(S^2+sigma_h^2)).
PurityResult input_purity(double S, double sigma1, double sigma_h);

/// Purity of the upconverted-photon subsystem at zero delay, from the
/// double series over recursion orders normalized by <n3>^2. The square
/// truncation window grows until the rim contribution drops below tol.
PurityResult upconverted_purity(double S, double sigma1, double sigma_h,
                                double p, double q, double tol = 1e-12);

}  // namespace sfg::analytic

#endif  // SFG_ANALYTIC_HPP
