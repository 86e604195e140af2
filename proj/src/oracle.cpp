#include "sfg/oracle.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <string>

namespace sfg::oracle {

namespace {

constexpr complexd kI{0.0, 1.0};

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Batched 1-D DFT along one axis of a column-major matrix, in place.
// sign follows FFTW: -1 applies e^{-2 pi i jk/n}, +1 applies e^{+2 pi i jk/n}.
void dft_axis(Eigen::MatrixXcd& m, bool along_a, int sign) {
  const int na = static_cast<int>(m.rows());
  const int nh = static_cast<int>(m.cols());
  auto* ptr = reinterpret_cast<fftw_complex*>(m.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (along_a) {
      int n = na;
      plan = fftw_plan_many_dft(1, &n, nh, ptr, nullptr, 1, na, ptr, nullptr,
                                1, na, sign, FFTW_ESTIMATE);
    } else {
      int n = nh;
      plan = fftw_plan_many_dft(1, &n, na, ptr, nullptr, na, 1, ptr, nullptr,
                                na, 1, sign, FFTW_ESTIMATE);
    }
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

// Unitary continuous-transform approximation along one axis with offset
// phase corrections. sign = -1: t -> omega, sign = +1: omega -> t.
void continuous_ft_axis(Eigen::MatrixXcd& data, const Axis& in,
                        const Axis& out, bool along_a, int sign) {
  const int n = in.n;
  Eigen::VectorXcd pre(n), post(n);
  const double scale = in.step / std::sqrt(2.0 * M_PI);
  const complexd c0 = std::polar(scale, sign * out.start * in.start);
  for (int j = 0; j < n; ++j)
    pre[j] = std::polar(1.0, sign * out.start * in.step * j);
  for (int k = 0; k < n; ++k)
    post[k] = c0 * std::polar(1.0, sign * in.start * out.step * k);

  if (along_a) {
    data.array().colwise() *= pre.array();
    dft_axis(data, true, sign);
    data.array().colwise() *= post.array();
  } else {
    data.array().rowwise() *= pre.transpose().array();
    dft_axis(data, false, sign);
    data.array().rowwise() *= post.transpose().array();
  }
}

double trapezoid_weight(int i, int n) {
  return (i == 0 || i == n - 1) ? 0.5 : 1.0;
}

void check_energy_capture(const JointGrid& grid, const char* what) {
  const double norm = grid_norm(grid);
  if (std::abs(norm - 1.0) > 1e-6)
    throw grid_too_small_error(std::string(what) + ": grid norm " +
                               std::to_string(norm) +
                               " deviates from 1 by more than 1e-6");
  // boundary-ring energy as a proxy for the truncated tail
  const int na = grid.axis_a.n, nh = grid.axis_h.n;
  double edge = 0.0;
  for (int j = 0; j < nh; ++j)
    edge += std::norm(grid.data(0, j)) + std::norm(grid.data(na - 1, j));
  for (int i = 0; i < na; ++i)
    edge += std::norm(grid.data(i, 0)) + std::norm(grid.data(i, nh - 1));
  edge *= grid.axis_a.step * grid.axis_h.step;
  if (edge > 1e-8)
    throw grid_too_small_error(std::string(what) +
                               ": boundary energy above the 1e-8 tail budget");
}

}  // namespace

// --- axes --------------------------------------------------------------------

void validate(const Axis& axis) {
  if (!(axis.step > 0.0) || !std::isfinite(axis.step) ||
      !std::isfinite(axis.start))
    throw invalid_parameter("Axis: step must be positive and finite");
  if (axis.n < 64 || !is_pow2(axis.n))
    throw invalid_parameter("Axis: n must be a power of two >= 64");
}

bool same_axis(const Axis& a, const Axis& b, double rel_tol) {
  const double scale = std::abs(a.step) * a.n;
  return a.n == b.n && std::abs(a.step - b.step) <= rel_tol * std::abs(a.step)
         && std::abs(a.start - b.start) <= rel_tol * scale;
}

Axis symmetric_axis(double center, double half_span, int n) {
  if (!(half_span > 0.0))
    throw invalid_parameter("symmetric_axis: half_span must be > 0");
  Axis ax;
  ax.step = 2.0 * half_span / n;
  ax.n = n;
  ax.start = center - ax.step * (n / 2);
  validate(ax);
  return ax;
}

Axis dual_axis(const Axis& axis, double center) {
  validate(axis);
  Axis dual;
  dual.n = axis.n;
  dual.step = 2.0 * M_PI / (axis.n * axis.step);
  dual.start = center - dual.step * (axis.n / 2);
  return dual;
}

double grid_norm(const JointGrid& grid) {
  const int na = grid.axis_a.n, nh = grid.axis_h.n;
  double sum = 0.0;
  for (int j = 0; j < nh; ++j) {
    const double wj = trapezoid_weight(j, nh);
    double col = 0.0;
    for (int i = 0; i < na; ++i)
      col += trapezoid_weight(i, na) * std::norm(grid.data(i, j));
    sum += wj * col;
  }
  return sum * grid.axis_a.step * grid.axis_h.step;
}

double grid_norm(const EscortGrid& grid) {
  double sum = 0.0;
  for (int i = 0; i < grid.axis.n; ++i)
    sum += trapezoid_weight(i, grid.axis.n) * std::norm(grid.data[i]);
  return sum * grid.axis.step;
}

// --- transforms ---------------------------------------------------------------

JointGrid ft_forward(const JointGrid& grid, double center_a, double center_h) {
  if (grid.domain != Domain::time)
    throw invalid_parameter("ft_forward: grid must be in the time domain");
  JointGrid out;
  out.axis_a = dual_axis(grid.axis_a, center_a);
  out.axis_h = dual_axis(grid.axis_h, center_h);
  out.domain = Domain::frequency;
  out.data = grid.data;
  continuous_ft_axis(out.data, grid.axis_a, out.axis_a, true, -1);
  continuous_ft_axis(out.data, grid.axis_h, out.axis_h, false, -1);
  return out;
}

JointGrid ft_inverse(const JointGrid& grid, double center_a, double center_h) {
  if (grid.domain != Domain::frequency)
    throw invalid_parameter("ft_inverse: grid must be in the frequency domain");
  JointGrid out;
  out.axis_a = dual_axis(grid.axis_a, center_a);
  out.axis_h = dual_axis(grid.axis_h, center_h);
  out.domain = Domain::time;
  out.data = grid.data;
  continuous_ft_axis(out.data, grid.axis_a, out.axis_a, true, +1);
  continuous_ft_axis(out.data, grid.axis_h, out.axis_h, false, +1);
  return out;
}

EscortGrid ft_forward(const EscortGrid& grid, double center) {
  if (grid.domain != Domain::time)
    throw invalid_parameter("ft_forward: escort grid must be in time domain");
  EscortGrid out;
  out.axis = dual_axis(grid.axis, center);
  out.domain = Domain::frequency;
  Eigen::MatrixXcd tmp = grid.data;
  continuous_ft_axis(tmp, grid.axis, out.axis, true, -1);
  out.data = tmp;
  return out;
}

EscortGrid ft_inverse(const EscortGrid& grid, double center) {
  if (grid.domain != Domain::frequency)
    throw invalid_parameter(
        "ft_inverse: escort grid must be in frequency domain");
  EscortGrid out;
  out.axis = dual_axis(grid.axis, center);
  out.domain = Domain::time;
  Eigen::MatrixXcd tmp = grid.data;
  continuous_ft_axis(tmp, grid.axis, out.axis, true, +1);
  out.data = tmp;
  return out;
}

// --- sampling -----------------------------------------------------------------

JointGrid sample_input(const PhotonSpec& photon, const Axis& freq_a,
                       const Axis& freq_h) {
  sfg::validate(photon);
  validate(freq_a);
  validate(freq_h);
  const double s1sq = photon.sigma1 * photon.sigma1;
  const double shsq = photon.sigma_h * photon.sigma_h;
  const double Ssq = photon.S * photon.S;
  const double pref =
      std::pow(Ssq + s1sq + shsq, 0.25) /
      std::sqrt(2.0 * M_PI * photon.S * photon.sigma1 * photon.sigma_h);

  JointGrid grid;
  grid.axis_a = freq_a;
  grid.axis_h = freq_h;
  grid.domain = Domain::frequency;
  grid.data.resize(freq_a.n, freq_h.n);
  for (int j = 0; j < freq_h.n; ++j) {
    const double y = freq_h.at(j) - photon.omega0h;
    for (int i = 0; i < freq_a.n; ++i) {
      const double x = freq_a.at(i) - photon.omega01;
      const double expo = -x * x / (4.0 * s1sq) - y * y / (4.0 * shsq) -
                          (x + y) * (x + y) / (4.0 * Ssq);
      grid.data(i, j) = pref * std::exp(expo) *
                        std::polar(1.0, photon.A1 * x * x);
    }
  }
  check_energy_capture(grid, "sample_input");
  return grid;
}

EscortGrid sample_escort(const EscortSpec& escort, const Axis& freq) {
  sfg::validate(escort);
  validate(freq);
  const double s2sq = escort.sigma2 * escort.sigma2;
  const double pref = std::pow(2.0 * M_PI * s2sq, -0.25);
  EscortGrid grid;
  grid.axis = freq;
  grid.domain = Domain::frequency;
  grid.data.resize(freq.n);
  for (int i = 0; i < freq.n; ++i) {
    const double w = freq.at(i);
    const double d = w - escort.omega02;
    grid.data[i] = pref * std::exp(-d * d / (4.0 * s2sq)) *
                   std::polar(1.0, w * escort.tau + escort.A2 * d * d);
  }
  const double norm = grid_norm(grid);
  if (std::abs(norm - 1.0) > 1e-6)
    throw grid_too_small_error("sample_escort: grid norm " +
                               std::to_string(norm) +
                               " deviates from 1 by more than 1e-6");
  return grid;
}

JointGrid input_time_grid(const PhotonSpec& photon, const Axis& time_a,
                          const Axis& time_h) {
  const Axis fa = dual_axis(time_a, photon.omega01);
  const Axis fh = dual_axis(time_h, photon.omega0h);
  JointGrid spec = sample_input(photon, fa, fh);
  JointGrid out = ft_inverse(spec, time_a.center(), time_h.center());
  out.axis_a = time_a;  // identical up to round-off by construction
  out.axis_h = time_h;
  return out;
}

EscortGrid escort_time_grid(const EscortSpec& escort, const Axis& time) {
  const Axis freq = dual_axis(time, escort.omega02);
  EscortGrid spec = sample_escort(escort, freq);
  EscortGrid out = ft_inverse(spec, time.center());
  out.axis = time;
  return out;
}

std::pair<Axis, Axis> default_axes(const PhotonSpec& photon,
                                   const EscortSpec& escort, int n_a, int n_h,
                                   double width_factor) {
  const auto widths = temporal_widths(photon);
  const double w2 = escort_temporal_width(escort);
  const double half_a =
      width_factor * std::max(widths[0], w2) + std::abs(escort.tau);
  const double half_h = width_factor * widths[1];
  return {symmetric_axis(0.0, half_a, n_a), symmetric_axis(0.0, half_h, n_h)};
}

// --- conversion ---------------------------------------------------------------

int recursion_depth(const EscortGrid& g, double gamma) {
  const double gmax = g.data.cwiseAbs().maxCoeff();
  const double x = std::sqrt(2.0 * M_PI) * std::abs(gamma) * gmax;
  return std::max(15, static_cast<int>(std::ceil(3.0 * x)));
}

std::pair<JointGrid, JointGrid> recursion_upconvert(const JointGrid& f0,
                                                    const EscortGrid& g,
                                                    double gamma, int K) {
  if (f0.domain != Domain::time || g.domain != Domain::time)
    throw invalid_parameter("recursion_upconvert: grids must be time-domain");
  if (!same_axis(f0.axis_a, g.axis))
    throw invalid_parameter(
        "recursion_upconvert: escort axis does not match the signal axis");
  if (K < 1) throw invalid_parameter("recursion_upconvert: K must be >= 1");

  const Eigen::ArrayXcd gv = g.data.array();
  const Eigen::ArrayXcd g2 = gv.abs2().cast<complexd>();
  const double c = 2.0 * M_PI * gamma * gamma;

  JointGrid f1{f0.axis_a, f0.axis_h, Domain::time, f0.data};
  Eigen::MatrixXcd even = f0.data;
  for (int k = 0; k + 2 <= K; k += 2) {
    even.array().colwise() *= g2;
    even *= -c / ((k + 1.0) * (k + 2.0));
    f1.data += even;
  }

  Eigen::MatrixXcd odd = f0.data;
  odd.array().colwise() *= gv;
  odd *= kI * std::sqrt(2.0 * M_PI) * gamma;
  JointGrid f3{f0.axis_a, f0.axis_h, Domain::time, odd};
  for (int k = 1; k + 2 <= K; k += 2) {
    odd.array().colwise() *= g2;
    odd *= -c / ((k + 1.0) * (k + 2.0));
    f3.data += odd;
  }
  return {std::move(f1), std::move(f3)};
}

std::pair<JointGrid, JointGrid> closed_form_upconvert(const JointGrid& f0,
                                                      const EscortGrid& g,
                                                      double gamma) {
  if (f0.domain != Domain::time || g.domain != Domain::time)
    throw invalid_parameter("closed_form_upconvert: grids must be time-domain");
  if (!same_axis(f0.axis_a, g.axis))
    throw invalid_parameter(
        "closed_form_upconvert: escort axis does not match the signal axis");

  const double coupling = std::sqrt(2.0 * M_PI) * gamma;
  JointGrid f1{f0.axis_a, f0.axis_h, Domain::time, f0.data};
  JointGrid f3{f0.axis_a, f0.axis_h, Domain::time, f0.data};
  for (int i = 0; i < f0.axis_a.n; ++i) {
    const complexd gi = g.data[i];
    const double mag = std::abs(gi);
    const double x = coupling * mag;
    f1.data.row(i) *= std::cos(x);
    if (std::abs(x) < 1e-8) {
      // sin(x) ~ x: i f0 (g/|g|) sin(x) -> i sqrt(2 pi) gamma f0 g
      f3.data.row(i) *= kI * coupling * gi;
    } else {
      f3.data.row(i) *= kI * (gi / mag) * std::sin(x);
    }
  }
  return {std::move(f1), std::move(f3)};
}

// --- metrics ------------------------------------------------------------------

double grid_efficiency(const JointGrid& f3) { return grid_norm(f3); }

double grid_purity(const JointGrid& grid) {
  const auto& m = grid.data;
  Eigen::MatrixXcd gram;
  if (m.rows() <= m.cols())
    gram = m * m.adjoint();
  else
    gram = m.adjoint() * m;
  const double tr = gram.trace().real();
  if (!(tr > 0.0))
    throw invalid_parameter("grid_purity: grid carries no amplitude");
  return gram.squaredNorm() / (tr * tr);
}

double grid_purity_quartic(const JointGrid& grid) {
  const auto& m = grid.data;
  const int na = static_cast<int>(m.rows());
  const int nh = static_cast<int>(m.cols());
  long double norm = 0.0;
  for (int a = 0; a < na; ++a)
    for (int h = 0; h < nh; ++h) norm += std::norm(m(a, h));
  long double total = 0.0;
  for (int a = 0; a < na; ++a)
    for (int ap = 0; ap < na; ++ap)
      for (int h = 0; h < nh; ++h)
        for (int hp = 0; hp < nh; ++hp)
          total += (m(a, h) * std::conj(m(ap, h)) * m(ap, hp) *
                    std::conj(m(a, hp)))
                       .real();
  return static_cast<double>(total / (norm * norm));
}

Eigen::VectorXd schmidt_coefficients(const JointGrid& grid) {
  const auto& m = grid.data;
  Eigen::MatrixXcd gram;
  if (m.rows() <= m.cols())
    gram = m * m.adjoint();
  else
    gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram);
  Eigen::VectorXd vals = solver.eigenvalues().reverse();
  vals = vals.cwiseMax(0.0);
  const double sum = vals.sum();
  if (!(sum > 0.0))
    throw invalid_parameter("schmidt_coefficients: grid carries no amplitude");
  return vals / sum;
}

double relative_l2(const JointGrid& a, const JointGrid& b) {
  if (!same_axis(a.axis_a, b.axis_a) || !same_axis(a.axis_h, b.axis_h))
    throw invalid_parameter("relative_l2: grids on different axes");
  const double ref = b.data.norm();
  if (ref == 0.0)
    return a.data.norm() == 0.0 ? 0.0
                                : std::numeric_limits<double>::infinity();
  return (a.data - b.data).norm() / ref;
}

double grid_fidelity(const JointGrid& a, const JointGrid& b) {
  if (!same_axis(a.axis_a, b.axis_a) || !same_axis(a.axis_h, b.axis_h))
    throw invalid_parameter("grid_fidelity: grids on different axes");
  const int na = a.axis_a.n, nh = a.axis_h.n;
  complexd inner{0.0, 0.0};
  double na2 = 0.0, nb2 = 0.0;
  for (int j = 0; j < nh; ++j) {
    const double wj = trapezoid_weight(j, nh);
    for (int i = 0; i < na; ++i) {
      const double w = wj * trapezoid_weight(i, na);
      inner += w * std::conj(a.data(i, j)) * b.data(i, j);
      na2 += w * std::norm(a.data(i, j));
      nb2 += w * std::norm(b.data(i, j));
    }
  }
  if (!(na2 > 0.0) || !(nb2 > 0.0))
    throw invalid_parameter("grid_fidelity: zero-norm grid");
  return std::norm(inner) / (na2 * nb2);
}

std::pair<Axis, Eigen::VectorXd> signal_spectral_marginal(
    const JointGrid& time_grid, double center) {
  if (time_grid.domain != Domain::time)
    throw invalid_parameter("signal_spectral_marginal: need a time grid");
  const Axis freq = dual_axis(time_grid.axis_a, center);
  Eigen::MatrixXcd data = time_grid.data;
  continuous_ft_axis(data, time_grid.axis_a, freq, true, -1);
  const int na = freq.n, nh = time_grid.axis_h.n;
  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(na);
  for (int j = 0; j < nh; ++j) {
    const double w = trapezoid_weight(j, nh) * time_grid.axis_h.step;
    for (int i = 0; i < na; ++i) marginal[i] += w * std::norm(data(i, j));
  }
  return {freq, std::move(marginal)};
}

std::pair<Axis, Eigen::VectorXd> signal_temporal_marginal(
    const JointGrid& time_grid) {
  if (time_grid.domain != Domain::time)
    throw invalid_parameter("signal_temporal_marginal: need a time grid");
  const int na = time_grid.axis_a.n, nh = time_grid.axis_h.n;
  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(na);
  for (int j = 0; j < nh; ++j) {
    const double w = trapezoid_weight(j, nh) * time_grid.axis_h.step;
    for (int i = 0; i < na; ++i)
      marginal[i] += w * std::norm(time_grid.data(i, j));
  }
  return {time_grid.axis_a, std::move(marginal)};
}

double effective_width(const Axis& axis, const Eigen::VectorXd& intensity) {
  if (intensity.size() != axis.n)
    throw invalid_parameter("effective_width: size mismatch");
  double m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < axis.n; ++i) {
    const double w = trapezoid_weight(i, axis.n) * intensity[i];
    m0 += w;
    m1 += w * axis.at(i);
  }
  if (!(m0 > 0.0))
    throw invalid_parameter("effective_width: intensity integrates to zero");
  const double mean = m1 / m0;
  double m2 = 0.0;
  for (int i = 0; i < axis.n; ++i) {
    const double d = axis.at(i) - mean;
    m2 += trapezoid_weight(i, axis.n) * intensity[i] * d * d;
  }
  return std::sqrt(m2 / m0);
}

JointGrid apply_spectral_chirp(const JointGrid& time_grid, double A3,
                               double center) {
  if (time_grid.domain != Domain::time)
    throw invalid_parameter("apply_spectral_chirp: need a time grid");
  const Axis freq = dual_axis(time_grid.axis_a, center);
  JointGrid out = time_grid;
  continuous_ft_axis(out.data, time_grid.axis_a, freq, true, -1);
  Eigen::VectorXcd phase(freq.n);
  for (int i = 0; i < freq.n; ++i) {
    const double d = freq.at(i) - center;
    phase[i] = std::polar(1.0, A3 * d * d);
  }
  out.data.array().colwise() *= phase.array();
  continuous_ft_axis(out.data, freq, time_grid.axis_a, true, +1);
  return out;
}

void write_grid_csv(const JointGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
  out << "# domain=" << (grid.domain == Domain::time ? "time" : "frequency")
      << "\n";
  out << "# axis_a: start=" << grid.axis_a.start << " step=" << grid.axis_a.step
      << " n=" << grid.axis_a.n << "\n";
  out << "# axis_h: start=" << grid.axis_h.start << " step=" << grid.axis_h.step
      << " n=" << grid.axis_h.n << "\n";
  out << "a,h,re,im\n";
  char buf[128];
  for (int i = 0; i < grid.axis_a.n; ++i)
    for (int j = 0; j < grid.axis_h.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n",
                    grid.axis_a.at(i), grid.axis_h.at(j),
                    grid.data(i, j).real(), grid.data(i, j).imag());
      out << buf;
    }
}

}  // namespace sfg::oracle
