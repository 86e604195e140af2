#include "sfg/analytic.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sfg/numerics.hpp"

namespace sfg::analytic {

namespace {

constexpr complexd kI{0.0, 1.0};
constexpr double kSeriesCrossover = 30.0;  // series -> quadrature handover
constexpr int kSeriesCap = 400;

}  // namespace

// --- escort pulse -----------------------------------------------------------

EscortField::EscortField(const EscortSpec& spec) : spec_(spec) {
  validate(spec);
  const double s2sq = spec.sigma2 * spec.sigma2;
  const double u = 4.0 * spec.A2 * s2sq;
  z2sq_ = 1.0 + u * u;
  peak_ = std::pow(2.0 * s2sq / (M_PI * z2sq_), 0.25);
  decay_ = s2sq / z2sq_;
  chirp_rate_ = -4.0 * spec.A2 * s2sq * s2sq / z2sq_;
  phase0_ = 0.5 * std::atan(u);
}

double EscortField::magnitude(double t) const {
  const double dt = t + spec_.tau;
  return peak_ * std::exp(-decay_ * dt * dt);
}

double EscortField::phase(double t) const {
  const double dt = t + spec_.tau;
  return spec_.omega02 * dt + chirp_rate_ * dt * dt + phase0_;
}

complexd EscortField::amplitude(double t) const {
  return std::polar(magnitude(t), phase(t));
}

complexd escort_time(const EscortSpec& spec, double t) {
  return EscortField(spec).amplitude(t);
}

// --- joint input ------------------------------------------------------------

JointInput::JointInput(const PhotonSpec& spec) : spec_(spec) {
  validate(spec);
  const double s1sq = spec.sigma1 * spec.sigma1;
  const double shsq = spec.sigma_h * spec.sigma_h;
  const double Ssq = spec.S * spec.S;
  // Spectrum ~ exp(-(q11 x^2 + 2 q12 x y + q22 y^2)/2); its 2-D transform is
  // again Gaussian with the inverse quadratic form.
  const complexd q11(0.5 / s1sq + 0.5 / Ssq, -2.0 * spec.A1);
  const complexd q22(0.5 / shsq + 0.5 / Ssq, 0.0);
  const complexd q12(0.5 / Ssq, 0.0);
  const complexd det = q11 * q22 - q12 * q12;
  const double norm =
      std::pow(Ssq + s1sq + shsq, 0.25) /
      std::sqrt(2.0 * M_PI * spec.S * spec.sigma1 * spec.sigma_h);
  pref_ = norm / std::sqrt(det);  // Re(det) > 0, principal branch
  a_tt_ = q22 / (2.0 * det);
  a_hh_ = q11 / (2.0 * det);
  a_th_ = q12 / det;
}

complexd JointInput::operator()(double t, double t_h) const {
  const complexd expo =
      -a_tt_ * (t * t) - a_hh_ * (t_h * t_h) + a_th_ * (t * t_h) +
      kI * (spec_.omega01 * t + spec_.omega0h * t_h);
  return pref_ * std::exp(expo);
}

complexd joint_input_time(const PhotonSpec& spec, double t, double t_h) {
  return JointInput(spec)(t, t_h);
}

// --- output waveforms -------------------------------------------------------

WaveformEvaluator::WaveformEvaluator(const PhotonSpec& photon,
                                     const EscortSpec& escort, double gamma)
    : joint_(photon), escort_(escort), gamma_(gamma) {
  if (!std::isfinite(gamma))
    throw invalid_parameter("WaveformEvaluator: gamma must be finite");
  coupling_ = std::sqrt(2.0 * M_PI) * gamma;
}

complexd WaveformEvaluator::remaining(double t, double t_h) const {
  return joint_(t, t_h) * std::cos(coupling_ * escort_.magnitude(t));
}

complexd WaveformEvaluator::upconverted(double t, double t_h) const {
  const double x = coupling_ * escort_.magnitude(t);
  return kI * joint_(t, t_h) * std::polar(std::sin(x), escort_.phase(t));
}

complexd WaveformEvaluator::first_order(double t, double t_h) const {
  return kI * coupling_ * joint_(t, t_h) * escort_.amplitude(t);
}

complexd remaining_waveform(const PhotonSpec& ph, const EscortSpec& es,
                            double gamma, double t, double t_h) {
  return WaveformEvaluator(ph, es, gamma).remaining(t, t_h);
}

complexd upconverted_waveform(const PhotonSpec& ph, const EscortSpec& es,
                              double gamma, double t, double t_h) {
  return WaveformEvaluator(ph, es, gamma).upconverted(t, t_h);
}

complexd upconverted_first_order(const PhotonSpec& ph, const EscortSpec& es,
                                 double gamma, double t, double t_h) {
  return WaveformEvaluator(ph, es, gamma).first_order(t, t_h);
}

// --- efficiency -------------------------------------------------------------

SeriesValue efficiency(const DimensionlessParams& params, double tol) {
  validate(params);
  if (!(tol > 0.0)) throw invalid_parameter("efficiency: tol must be > 0");
  const double p = params.p, q = params.q, T = params.T;

  if (p == 0.0) return SeriesValue{0.0, 1, 0.0, true};

  if (p > kSeriesCrossover) {
    SeriesValue out;
    out.value = efficiency_quadrature(p, q, T);
    out.terms_used = 1;
    out.last_term = 0.0;
    out.converged = true;
    return out;
  }

  numerics::KahanSum acc;
  SeriesValue out;
  const double p2 = p * p;
  double pow_fact = 1.0;  // p^{2k} / (2k)!
  int small_streak = 0;
  for (int k = 1; k <= kSeriesCap; ++k) {
    pow_fact *= p2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double damp =
        std::exp(-k * T * T / (1.0 + q * k)) / std::sqrt(1.0 + q * k);
    const double term = (k % 2 == 1 ? 0.5 : -0.5) * pow_fact * damp;
    acc.add(term);
    out.terms_used = k;
    out.last_term = std::abs(term);
    if (out.last_term < tol * std::max(std::abs(acc.value()), 1e-300)) {
      if (++small_streak >= 3) {
        out.converged = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  out.value = acc.value();
  if (!out.converged)
    throw convergence_error(
        "efficiency: series did not converge within " +
            std::to_string(kSeriesCap) + " terms",
        out);
  if (out.value < -1e-9 || out.value > 1.0 + 1e-9)
    throw std::runtime_error("efficiency: series value " +
                             std::to_string(out.value) + " outside [0, 1]");
  out.value = std::min(1.0, std::max(0.0, out.value));
  return out;
}

double efficiency_low_q(double p, double T) {
  const double s = std::sin(0.5 * std::exp(-0.5 * T * T) * p);
  return s * s;
}

double efficiency_quadrature(double p, double q, double T, double abs_tol) {
  if (!(q > 0.0)) throw invalid_parameter("efficiency_quadrature: q <= 0");
  const double shift = T * std::sqrt(2.0 / q);
  const double inv_norm = 1.0 / std::sqrt(2.0 * M_PI);
  auto f = [&](double u) {
    const double du = u + shift;
    const double s = std::sin(0.5 * p * std::exp(-0.25 * q * du * du));
    return inv_norm * std::exp(-0.5 * u * u) * s * s;
  };
  const double L = 10.0;
  // seed panels at the escort feature so the error estimator sees it
  const double uf = 2.0 / std::sqrt(q);
  std::vector<double> breaks;
  for (double m : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double x = -shift + m * uf;
    if (x > -L && x < L) breaks.push_back(x);
  }
  for (double x : {-8.0, -4.0, 0.0, 4.0, 8.0}) breaks.push_back(x);
  return numerics::integrate_adaptive<double>(f, -L, L, abs_tol, breaks);
}

// --- optimal coupling -------------------------------------------------------

namespace {

// d/dp of the four-term truncation of the efficiency series
double truncation4_derivative(double p, double q, double T) {
  double sum = 0.0;
  double pow_fact = 1.0;  // p^{2k}/(2k)!
  const double p2 = p * p;
  for (int k = 1; k <= 4; ++k) {
    pow_fact *= p2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double damp =
        std::exp(-k * T * T / (1.0 + q * k)) / std::sqrt(1.0 + q * k);
    const double dterm = (k % 2 == 1 ? 1.0 : -1.0) * damp * pow_fact *
                         (2.0 * k) / p;  // d/dp p^{2k} = 2k p^{2k-1}
    sum += dterm;
  }
  return 0.5 * sum;
}

}  // namespace

double optimal_p_estimate(double q, double T, double p_max) {
  if (!(q > 0.0)) throw invalid_parameter("optimal_p_estimate: q must be > 0");
  if (!(p_max > 0.0))
    throw invalid_parameter("optimal_p_estimate: p_max must be > 0");
  const int n_scan = 2000;
  const double step = p_max / n_scan;
  double prev_p = step;
  double prev_d = truncation4_derivative(prev_p, q, T);
  for (int i = 2; i <= n_scan; ++i) {
    const double cur_p = i * step;
    const double cur_d = truncation4_derivative(cur_p, q, T);
    if (prev_d > 0.0 && cur_d <= 0.0) {
      double lo = prev_p, hi = cur_p;
      for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (truncation4_derivative(mid, q, T) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_p = cur_p;
    prev_d = cur_d;
  }
  throw no_peak_error(
      "optimal_p_estimate: no stationary point of the four-term truncation "
      "in (0, " +
      std::to_string(p_max) + "]; expected for large |T|");
}

OptimalPoint optimal_p_refined(double q, double T, double p_max) {
  auto eff = [&](double p) {
    DimensionlessParams d;
    d.p = p;
    d.q = q;
    d.T = T;
    return efficiency(d).value;
  };
  auto refine = [&](double lo, double hi, int n_scan) {
    int best_i = 0;
    double best_v = -1.0;
    for (int i = 0; i <= n_scan; ++i) {
      const double v = eff(lo + (hi - lo) * i / n_scan);
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    if (best_i == 0 || best_i == n_scan) {
      const double p = lo + (hi - lo) * best_i / n_scan;
      return OptimalPoint{p, best_v};
    }
    const double a = lo + (hi - lo) * (best_i - 1) / n_scan;
    const double b = lo + (hi - lo) * (best_i + 1) / n_scan;
    const double p = numerics::golden_section_max(eff, a, b, 1e-12);
    return OptimalPoint{p, eff(p)};
  };

  // global dense scan, plus a finer pass around the four-term seed when it
  // exists (the estimate marks the first peak; the scan guards the cases
  // where that undershoots the series maximum badly)
  OptimalPoint best = refine(p_max / 4000.0, p_max, 4000);
  try {
    const double seed = optimal_p_estimate(q, T, p_max);
    const OptimalPoint local =
        refine(std::max(1e-6, 0.5 * seed), std::min(p_max, 1.6 * seed), 800);
    if (local.efficiency > best.efficiency) best = local;
  } catch (const no_peak_error&) {
    // dense scan already covers it
  }
  return best;
}

// --- fidelity ---------------------------------------------------------------

double fidelity_first_order(const PhotonSpec& photon, const EscortSpec& escort,
                            double gamma) {
  WaveformEvaluator wf(photon, escort, gamma);
  const auto widths = temporal_widths(photon);
  const double w1 = widths[0], wh = widths[1];
  const double w2 = escort_temporal_width(escort);

  const double lx = 12.0 * w1, ly = 12.0 * wh;
  std::vector<double> xb, yb;
  for (double m : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
    const double x = -escort.tau + m * w2;
    if (x > -lx && x < lx) xb.push_back(x);
  }
  for (double m : {-6.0, -3.0, 0.0, 3.0, 6.0}) {
    xb.push_back(m * w1);
    yb.push_back(m * wh);
  }

  // scale the tolerance to the first-order population so small-gamma
  // fidelities stay accurate in the ratio
  const DimensionlessParams dl = reduce(photon, escort, gamma);
  const double n31_scale = dl.p * dl.p *
                           std::exp(-dl.T * dl.T / (1.0 + dl.q)) /
                           (4.0 * std::sqrt(1.0 + dl.q));
  const double tol = std::max(1e-16, 1e-9 * n31_scale);

  const double n3 = numerics::integrate2d_adaptive<double>(
      [&](double t, double th) { return std::norm(wf.upconverted(t, th)); },
      -lx, lx, -ly, ly, tol, xb, yb);
  if (n3 < 1e-12)
    throw undefined_fidelity_error(
        "fidelity_first_order: upconverted population below 1e-12");
  const double n31 = numerics::integrate2d_adaptive<double>(
      [&](double t, double th) { return std::norm(wf.first_order(t, th)); },
      -lx, lx, -ly, ly, tol, xb, yb);
  const complexd overlap = numerics::integrate2d_adaptive<complexd>(
      [&](double t, double th) {
        return std::conj(wf.upconverted(t, th)) * wf.first_order(t, th);
      },
      -lx, lx, -ly, ly, tol, xb, yb);

  double fid = std::norm(overlap) / (n3 * n31);
  if (fid > 1.0 + 1e-6)
    throw std::runtime_error("fidelity_first_order: value " +
                             std::to_string(fid) + " above 1");
  return std::min(1.0, std::max(0.0, fid));
}

// --- purity -----------------------------------------------------------------

PurityResult input_purity(double S, double sigma1, double sigma_h) {
  if (!(S > 0.0) || !(sigma1 > 0.0) || !(sigma_h > 0.0))
    throw invalid_parameter("input_purity: S, sigma1, sigma_h must be > 0");
  const double s1sq = sigma1 * sigma1, shsq = sigma_h * sigma_h, Ssq = S * S;
  PurityResult out;
  out.purity = S * std::sqrt(Ssq + s1sq + shsq) /
               (std::sqrt(Ssq + s1sq) * std::sqrt(Ssq + shsq));
  out.renyi2 = -std::log(out.purity);
  out.series = SeriesValue{out.purity, 1, 0.0, true};
  return out;
}

PurityResult upconverted_purity(double S, double sigma1, double sigma_h,
                                double p, double q, double tol) {
  if (!(S > 0.0) || !(sigma1 > 0.0) || !(sigma_h > 0.0))
    throw invalid_parameter(
        "upconverted_purity: S, sigma1, sigma_h must be > 0");
  if (!(q > 0.0)) throw invalid_parameter("upconverted_purity: q must be > 0");
  if (!(tol > 0.0))
    throw invalid_parameter("upconverted_purity: tol must be > 0");
  if (!(p > 0.0))
    throw invalid_parameter(
        "upconverted_purity: undefined at p = 0 (no upconverted photon)");

  const double s1sq = sigma1 * sigma1, shsq = sigma_h * sigma_h, Ssq = S * S;
  const double sin_sq = Ssq + s1sq + shsq;
  const double log_p2 = 2.0 * std::log(p);

  auto term = [&](int m, int n) {
    const double D = 2.0 * (1.0 + m * q) * (1.0 + n * q) * Ssq * sin_sq +
                     (2.0 + (m + n) * q) * s1sq * shsq;
    const double lg = (m + n) * log_p2 - std::lgamma(2.0 * m + 1.0) -
                      std::lgamma(2.0 * n + 1.0) + std::log(S) +
                      0.5 * (std::log(sin_sq) - std::log(D));
    const double sign = ((m + n) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(lg);
  };

  constexpr int kWindowCap = 150;
  numerics::KahanSum acc;
  double max_abs_term = 0.0;
  double rim = 0.0, prev_rim = std::numeric_limits<double>::infinity();
  int window = 0;
  bool converged = false;
  for (int N = 1; N <= kWindowCap; ++N) {
    numerics::KahanSum rim_acc;
    for (int m = 1; m < N; ++m) {
      const double t = term(m, N);
      rim_acc.add(t + term(N, m));
      max_abs_term = std::max(max_abs_term, std::abs(t));
    }
    const double tc = term(N, N);
    rim_acc.add(tc);
    max_abs_term = std::max(max_abs_term, std::abs(tc));
    rim = std::abs(rim_acc.value());
    acc.add(rim_acc.value());
    window = N;
    const double floor = std::max(std::abs(acc.value()), 1e-300);
    if (rim < tol * floor && prev_rim < tol * floor && N >= 4) {
      converged = true;
      break;
    }
    prev_rim = rim;
  }

  const double n3 = efficiency(DimensionlessParams{p, 0.0, q, 0.0}).value;
  const double raw = acc.value() / (2.0 * std::sqrt(2.0) * n3 * n3);

  SeriesValue series;
  series.value = raw;
  series.terms_used = window * window;
  series.last_term = rim;
  series.converged = converged;
  if (!converged)
    throw convergence_error(
        "upconverted_purity: double series did not converge", series);
  // alternating double series: flag when cancellation has consumed the
  // available precision
  if (max_abs_term * 1e-15 > 0.01 * std::abs(acc.value()))
    throw convergence_error(
        "upconverted_purity: cancellation exhausts double precision at p = " +
            std::to_string(p),
        series);
  if (raw <= 0.0 || raw > 1.0 + 1e-9)
    throw std::runtime_error("upconverted_purity: value " +
                             std::to_string(raw) + " outside (0, 1]");

  PurityResult out;
  out.purity = std::min(1.0, raw);
  out.renyi2 = -std::log(out.purity);
  out.series = series;
  return out;
}

}  // namespace sfg::analytic
