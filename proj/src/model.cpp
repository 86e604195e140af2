#include "sfg/model.hpp"

#include <cmath>
#include <complex>

namespace sfg {

namespace {

bool finite(double x) { return std::isfinite(x); }

// 1 + 16 A^2 s^4, the squared modulus of zeta = 1 - 4 i A s^2
double zeta_sq(double A, double s) {
  const double u = 4.0 * A * s * s;
  return 1.0 + u * u;
}

}  // namespace

void validate(const PhotonSpec& ph) {
  if (!(ph.sigma1 > 0.0) || !finite(ph.sigma1))
    throw invalid_parameter("PhotonSpec: sigma1 must be positive");
  if (!(ph.sigma_h > 0.0) || !finite(ph.sigma_h))
    throw invalid_parameter("PhotonSpec: sigma_h must be positive");
  if (!(ph.S > 0.0) || !finite(ph.S))
    throw invalid_parameter("PhotonSpec: S must be positive");
  if (!finite(ph.A1) || !finite(ph.omega01) || !finite(ph.omega0h))
    throw invalid_parameter("PhotonSpec: A1 and carriers must be finite");
}

void validate(const EscortSpec& es) {
  if (!(es.sigma2 > 0.0) || !finite(es.sigma2))
    throw invalid_parameter("EscortSpec: sigma2 must be positive");
  if (!finite(es.A2) || !finite(es.tau) || !finite(es.omega02))
    throw invalid_parameter("EscortSpec: A2, tau, omega02 must be finite");
}

void validate(const DimensionlessParams& pr) {
  if (!(pr.p >= 0.0) || !finite(pr.p))
    throw invalid_parameter("DimensionlessParams: p must be >= 0");
  if (!(pr.q > 0.0) || !finite(pr.q))
    throw invalid_parameter("DimensionlessParams: q must be > 0");
  if (!finite(pr.T))
    throw invalid_parameter("DimensionlessParams: T must be finite");
}

DimensionlessParams reduce(const PhotonSpec& ph, const EscortSpec& es,
                           double gamma) {
  validate(ph);
  validate(es);
  if (!finite(gamma)) throw invalid_parameter("reduce: gamma must be finite");

  const double s1sq = ph.sigma1 * ph.sigma1;
  const double shsq = ph.sigma_h * ph.sigma_h;
  const double Ssq = ph.S * ph.S;
  const double s2sq = es.sigma2 * es.sigma2;
  const double z2sq = zeta_sq(es.A2, es.sigma2);

  DimensionlessParams out;
  out.gamma = gamma;
  out.p = 2.0 * std::pow(8.0 * M_PI, 0.25) * std::pow(s2sq / z2sq, 0.25) *
          std::abs(gamma);
  out.T = std::sqrt(2.0) * es.sigma2 * es.tau / std::sqrt(z2sq);
  const double stretch1 = 1.0 + s1sq / Ssq +
                          16.0 * ph.A1 * ph.A1 * s1sq * s1sq * (Ssq + shsq) /
                              (Ssq + s1sq + shsq);
  out.q = (s2sq / s1sq) * stretch1 / z2sq;
  return out;
}

double q_zero_chirp(const PhotonSpec& ph, const EscortSpec& es) {
  validate(ph);
  validate(es);
  const double r = es.sigma2 / ph.sigma1;
  return r * r;
}

double gamma_for_p(double p, const EscortSpec& es) {
  validate(es);
  if (!(p >= 0.0) || !std::isfinite(p))
    throw invalid_parameter("gamma_for_p: p must be >= 0");
  const double s2sq = es.sigma2 * es.sigma2;
  const double z2sq = zeta_sq(es.A2, es.sigma2);
  return p / (2.0 * std::pow(8.0 * M_PI, 0.25)) * std::pow(z2sq / s2sq, 0.25);
}

PhysicalPoint canonical_point(double p, double q, double T) {
  if (!(q > 0.0)) throw invalid_parameter("canonical_point: q must be > 0");
  PhysicalPoint pt;
  pt.photon = PhotonSpec{};  // sigma1 = sigma_h = 1, S = 1e9, A1 = 0
  pt.escort.sigma2 = std::sqrt(q);
  pt.escort.A2 = 0.0;
  pt.escort.tau = T / (std::sqrt(2.0) * pt.escort.sigma2);
  pt.gamma = gamma_for_p(p, pt.escort);
  return pt;
}

PhysicalPoint compression_point(double p, double chirp) {
  PhysicalPoint pt;
  pt.photon = PhotonSpec{};
  pt.photon.A1 = chirp;
  pt.escort.sigma2 = 1.0;
  pt.escort.A2 = -chirp;
  pt.escort.tau = 0.0;
  pt.gamma = gamma_for_p(p, pt.escort);
  return pt;
}

std::array<double, 2> temporal_widths(const PhotonSpec& ph) {
  validate(ph);
  // Covariance of the joint temporal intensity from the complex quadratic
  // form of the spectrum: intensity ~ exp(-v^T R v) with R = Re(Q^{-1}),
  // covariance = R^{-1} / 2.
  const double s1sq = ph.sigma1 * ph.sigma1;
  const double shsq = ph.sigma_h * ph.sigma_h;
  const double Ssq = ph.S * ph.S;
  const std::complex<double> q11(0.5 / s1sq + 0.5 / Ssq, -2.0 * ph.A1);
  const std::complex<double> q22(0.5 / shsq + 0.5 / Ssq, 0.0);
  const std::complex<double> q12(0.5 / Ssq, 0.0);
  const std::complex<double> det = q11 * q22 - q12 * q12;
  const double r11 = std::real(q22 / det);
  const double r22 = std::real(q11 / det);
  const double r12 = std::real(-q12 / det);
  const double rdet = r11 * r22 - r12 * r12;
  return {std::sqrt(r22 / rdet / 2.0), std::sqrt(r11 / rdet / 2.0)};
}

double escort_temporal_width(const EscortSpec& es) {
  validate(es);
  return std::sqrt(zeta_sq(es.A2, es.sigma2)) / (2.0 * es.sigma2);
}

void to_json(nlohmann::json& j, const PhotonSpec& ph) {
  j = nlohmann::json{{"sigma1", ph.sigma1},   {"sigma_h", ph.sigma_h},
                     {"S", ph.S},             {"omega01", ph.omega01},
                     {"omega0h", ph.omega0h}, {"A1", ph.A1}};
}

void from_json(const nlohmann::json& j, PhotonSpec& ph) {
  ph = PhotonSpec{};
  if (j.contains("sigma1")) j.at("sigma1").get_to(ph.sigma1);
  if (j.contains("sigma_h")) j.at("sigma_h").get_to(ph.sigma_h);
  if (j.contains("S")) j.at("S").get_to(ph.S);
  if (j.contains("omega01")) j.at("omega01").get_to(ph.omega01);
  if (j.contains("omega0h")) j.at("omega0h").get_to(ph.omega0h);
  if (j.contains("A1")) j.at("A1").get_to(ph.A1);
  validate(ph);
}

void to_json(nlohmann::json& j, const EscortSpec& es) {
  j = nlohmann::json{{"sigma2", es.sigma2},
                     {"omega02", es.omega02},
                     {"A2", es.A2},
                     {"tau", es.tau}};
}

void from_json(const nlohmann::json& j, EscortSpec& es) {
  es = EscortSpec{};
  if (j.contains("sigma2")) j.at("sigma2").get_to(es.sigma2);
  if (j.contains("omega02")) j.at("omega02").get_to(es.omega02);
  if (j.contains("A2")) j.at("A2").get_to(es.A2);
  if (j.contains("tau")) j.at("tau").get_to(es.tau);
  validate(es);
}

void to_json(nlohmann::json& j, const DimensionlessParams& pr) {
  j = nlohmann::json{
      {"p", pr.p}, {"T", pr.T}, {"q", pr.q}, {"gamma", pr.gamma}};
}

void from_json(const nlohmann::json& j, DimensionlessParams& pr) {
  pr = DimensionlessParams{};
  if (j.contains("p")) j.at("p").get_to(pr.p);
  if (j.contains("T")) j.at("T").get_to(pr.T);
  if (j.contains("q")) j.at("q").get_to(pr.q);
  if (j.contains("gamma")) j.at("gamma").get_to(pr.gamma);
  validate(pr);
}

}  // namespace sfg
