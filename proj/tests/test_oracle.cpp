#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sfg/analytic.hpp"
#include "sfg/figures.hpp"
#include "sfg/model.hpp"
#include "sfg/oracle.hpp"

using namespace sfg;
using namespace sfg::oracle;

namespace {

JointGrid time_grid_for(const PhysicalPoint& pt, int n_a = 1024,
                        int n_h = 256) {
  auto [axis_a, axis_h] = default_axes(pt.photon, pt.escort, n_a, n_h);
  return input_time_grid(pt.photon, axis_a, axis_h);
}

}  // namespace

TEST_CASE("axis construction and validation") {
  const Axis t = symmetric_axis(0.0, 8.0, 128);
  CHECK(t.n == 128);
  CHECK(t.at(64) == doctest::Approx(0.0));
  const Axis f = dual_axis(t, 0.0);
  CHECK(f.step == doctest::Approx(2.0 * M_PI / (t.n * t.step)).epsilon(1e-15));
  CHECK(f.at(64) == doctest::Approx(0.0));

  CHECK_THROWS_AS(validate(Axis{0.0, 1.0, 100}), invalid_parameter);  // not 2^k
  CHECK_THROWS_AS(validate(Axis{0.0, 1.0, 32}), invalid_parameter);   // < 64
  CHECK_THROWS_AS(validate(Axis{0.0, -1.0, 128}), invalid_parameter);
}

TEST_CASE("Gaussian spectrum transforms to the expected waveform") {
  const Axis t = symmetric_axis(0.0, 12.0, 512);
  const Axis f = dual_axis(t, 0.0);
  EscortGrid spec;
  spec.axis = f;
  spec.domain = Domain::frequency;
  spec.data.resize(f.n);
  for (int i = 0; i < f.n; ++i) {
    const double w = f.at(i);
    spec.data[i] = std::pow(2.0 * M_PI, -0.25) * std::exp(-w * w / 4.0);
  }
  const EscortGrid wave = ft_inverse(spec, 0.0);
  CHECK(grid_norm(wave) == doctest::Approx(1.0).epsilon(1e-10));
  const double pref = std::pow(2.0 / M_PI, 0.25);
  for (int i = 0; i < t.n; i += 37) {
    const double tt = t.at(i);
    const double expected = pref * std::exp(-tt * tt);
    CHECK(std::abs(wave.data[i] - expected) <= 1e-10);
  }
}

TEST_CASE("round trip is the identity on band-limited input") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Axis t = symmetric_axis(0.0, 20.0, 256);
  EscortGrid wave;
  wave.axis = t;
  wave.domain = Domain::time;
  wave.data.resize(t.n);
  for (int i = 0; i < t.n; ++i) {
    const double x = t.at(i);
    complexd v = 0.0;
    // a few random smooth Gaussians
    v += u(rng) * std::exp(-(x - 3.0) * (x - 3.0) / 4.0);
    v += complexd(0.0, 0.4) * std::exp(-x * x / 2.0) * std::cos(2.0 * x);
    wave.data[i] = v + 0.2 * std::exp(-(x + 5.0) * (x + 5.0));
  }
  const EscortGrid back = ft_inverse(ft_forward(wave, 0.0), 0.0);
  CHECK((back.data - wave.data).norm() <= 1e-12 * wave.data.norm());

  // joint grids too
  PhotonSpec ph;
  const auto pt = canonical_point(1.0, 1.0, 0.0);
  const JointGrid g = time_grid_for(pt, 128, 128);
  const JointGrid rt = ft_inverse(ft_forward(g), 0.0, 0.0);
  CHECK((rt.data - g.data).norm() <= 1e-12 * g.data.norm());
}

TEST_CASE("chirped escort grid matches the analytic waveform") {
  EscortSpec es;
  es.A2 = 5.0;
  es.tau = 0.5;
  const double w2 = escort_temporal_width(es);
  const Axis t = symmetric_axis(0.0, 10.0 * w2 + std::abs(es.tau), 2048);
  const EscortGrid g = escort_time_grid(es, t);
  double worst = 0.0;
  for (int i = 0; i < t.n; ++i)
    worst = std::max(worst,
                     std::abs(g.data[i] - analytic::escort_time(es, t.at(i))));
  CHECK(worst <= 1e-10);
}

TEST_CASE("sample_input: norm, separability, Schmidt spectrum") {
  PhotonSpec ph;  // separable
  const auto axes = default_axes(ph, EscortSpec{}, 256, 256);
  const JointGrid spec = sample_input(ph, dual_axis(axes.first, 0.0),
                                      dual_axis(axes.second, 0.0));
  CHECK(std::abs(grid_norm(spec) - 1.0) <= 1e-6);
  const auto schmidt = schmidt_coefficients(spec);
  CHECK(schmidt[0] >= 1.0 - 2e-6);  // factorizes

  // entangled case: Schmidt number matches the closed-form purity
  PhotonSpec ent;
  ent.S = 1.0;
  const auto axes_e = default_axes(ent, EscortSpec{}, 512, 512);
  const JointGrid spec_e = sample_input(ent, dual_axis(axes_e.first, 0.0),
                                        dual_axis(axes_e.second, 0.0));
  const auto lam = schmidt_coefficients(spec_e);
  double sum_sq = 0.0;
  for (int i = 0; i < lam.size(); ++i) sum_sq += lam[i] * lam[i];
  const double expected = analytic::input_purity(1.0, 1.0, 1.0).purity;
  CHECK(1.0 / sum_sq == doctest::Approx(1.0 / expected).epsilon(1e-4));
}

TEST_CASE("sampling rejects grids that truncate the state") {
  PhotonSpec ph;
  const Axis tiny_t = symmetric_axis(0.0, 0.5, 64);  // too narrow in time
  CHECK_THROWS_AS(input_time_grid(ph, tiny_t, tiny_t), grid_too_small_error);
  EscortSpec es;
  const Axis tiny_f = symmetric_axis(0.0, 0.5, 64);
  CHECK_THROWS_AS(sample_escort(es, tiny_f), grid_too_small_error);
}

TEST_CASE("recursion base cases") {
  const auto pt = canonical_point(2.0, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 256, 128);
  const EscortGrid g = escort_time_grid(pt.escort, f0.axis_a);

  // K = 1: upconverted term is exactly i sqrt(2 pi) gamma f0 g
  const auto [f1, f3] = recursion_upconvert(f0, g, pt.gamma, 1);
  CHECK((f1.data - f0.data).norm() == 0.0);
  double worst = 0.0;
  const complexd pref = complexd(0.0, 1.0) * std::sqrt(2.0 * M_PI) * pt.gamma;
  for (int i = 0; i < f0.axis_a.n; i += 13)
    for (int j = 0; j < f0.axis_h.n; j += 7)
      worst = std::max(worst, std::abs(f3.data(i, j) -
                                       pref * g.data[i] * f0.data(i, j)));
  CHECK(worst <= 1e-15);

  // gamma = 0 leaves everything in the input mode
  const auto [f1z, f3z] = recursion_upconvert(f0, g, 0.0, 9);
  CHECK(f3z.data.norm() == 0.0);
  CHECK((f1z.data - f0.data).norm() == 0.0);

  CHECK_THROWS_AS(recursion_upconvert(f0, g, 1.0, 0), invalid_parameter);
}

TEST_CASE("recursion converges to the closed form") {
  const auto pt = canonical_point(2.0, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 512, 128);
  const EscortGrid g = escort_time_grid(pt.escort, f0.axis_a);
  const auto [f1_cf, f3_cf] = closed_form_upconvert(f0, g, pt.gamma);

  const int K = recursion_depth(g, pt.gamma);
  CHECK(K >= 15);
  const auto [f1, f3] = recursion_upconvert(f0, g, pt.gamma, K);
  CHECK(relative_l2(f3, f3_cf) < 1e-8);
  CHECK(relative_l2(f1, f1_cf) < 1e-8);

  // energy conservation at convergence
  CHECK(grid_norm(f1) + grid_norm(f3) == doctest::Approx(1.0).epsilon(1e-6));

  // convergence is monotone in K once underway
  double prev = 1e9;
  for (int k : {5, 7, 9, 11, 13}) {
    const auto [f1k, f3k] = recursion_upconvert(f0, g, pt.gamma, k);
    const double err = relative_l2(f3k, f3_cf);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("closed-form grid agrees with the analytic waveform evaluator") {
  const auto pt = canonical_point(2.0, 1.0, 1.0);
  const JointGrid f0 = time_grid_for(pt, 512, 128);
  const EscortGrid g = escort_time_grid(pt.escort, f0.axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, pt.gamma);
  analytic::WaveformEvaluator wf(pt.photon, pt.escort, pt.gamma);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < f0.axis_a.n; ++i)
    for (int j = 0; j < f0.axis_h.n; j += 4) {
      const complexd ref = wf.upconverted(f0.axis_a.at(i), f0.axis_h.at(j));
      num += std::norm(f3.data(i, j) - ref);
      den += std::norm(ref);
    }
  CHECK(std::sqrt(num / den) <= 1e-7);
}

TEST_CASE("grid efficiency values") {
  JointGrid zero;
  zero.axis_a = symmetric_axis(0.0, 5.0, 64);
  zero.axis_h = zero.axis_a;
  zero.data = Eigen::MatrixXcd::Zero(64, 64);
  CHECK(grid_efficiency(zero) == 0.0);

  const auto pt = canonical_point(2.0, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 1024, 256);
  const EscortGrid g = escort_time_grid(pt.escort, f0.axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, pt.gamma);
  CHECK(grid_efficiency(f3) ==
        doctest::Approx(0.5355152058460977).epsilon(1e-6));

  // monochromatic-escort regime reaches unit efficiency at p = pi
  const auto pt_low = canonical_point(M_PI, 1e-6, 0.0);
  auto [axis_a, axis_h] = default_axes(pt_low.photon, pt_low.escort, 32768, 64);
  const JointGrid f0_low = input_time_grid(pt_low.photon, axis_a, axis_h);
  const EscortGrid g_low = escort_time_grid(pt_low.escort, axis_a);
  const auto [f1l, f3l] = closed_form_upconvert(f0_low, g_low, pt_low.gamma);
  CHECK(grid_efficiency(f3l) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("grid purity: limits, invariances, quartic agreement") {
  // separable grid
  PhotonSpec sep;
  const auto axes = default_axes(sep, EscortSpec{}, 256, 256);
  const JointGrid g_sep = input_time_grid(sep, axes.first, axes.second);
  CHECK(grid_purity(g_sep) == doctest::Approx(1.0).epsilon(1e-6));

  // entangled input matches the closed form
  PhotonSpec ent;
  ent.S = 1.0;
  const auto axes_e = default_axes(ent, EscortSpec{}, 512, 512);
  const JointGrid g_ent = input_time_grid(ent, axes_e.first, axes_e.second);
  CHECK(grid_purity(g_ent) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-4));

  // invariance under axis exchange and global phase
  JointGrid swapped;
  swapped.axis_a = g_ent.axis_h;
  swapped.axis_h = g_ent.axis_a;
  swapped.domain = g_ent.domain;
  swapped.data = g_ent.data.transpose();
  CHECK(grid_purity(swapped) == doctest::Approx(grid_purity(g_ent)).epsilon(1e-12));
  JointGrid phased = g_ent;
  phased.data *= std::polar(1.0, 1.234);
  CHECK(grid_purity(phased) == doctest::Approx(grid_purity(g_ent)).epsilon(1e-12));

  // O(n^4) direct discretization agrees with the Gram route on 64x64
  PhotonSpec small;
  small.S = 1.0;
  const auto axes_s = default_axes(small, EscortSpec{}, 64, 64);
  const JointGrid g_small = input_time_grid(small, axes_s.first, axes_s.second);
  CHECK(grid_purity_quartic(g_small) ==
        doctest::Approx(grid_purity(g_small)).epsilon(1e-11));
}

TEST_CASE("upconverted grid purity matches the double series") {
  const double q = 1.0, S = 1.0;
  const double p = analytic::optimal_p_refined(q, 0.0).p;
  PhotonSpec photon;
  photon.S = S;
  EscortSpec escort;
  escort.sigma2 = std::sqrt(q / (1.0 + 1.0 / (S * S)));
  const double gamma = gamma_for_p(p, escort);
  auto [axis_a, axis_h] = default_axes(photon, escort, 1024, 1024);
  const JointGrid f0 = input_time_grid(photon, axis_a, axis_h);
  const EscortGrid g = escort_time_grid(escort, axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, gamma);
  const double series = analytic::upconverted_purity(S, 1.0, 1.0, p, q).purity;
  CHECK(grid_purity(f3) == doctest::Approx(series).epsilon(1e-3));
}

TEST_CASE("effective width: moments of known spectra") {
  // unchirped unit-bandwidth marginal
  const auto pt = canonical_point(1e-4, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 1024, 128);
  const EscortGrid g = escort_time_grid(pt.escort, f0.axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, pt.gamma);

  const auto [faxis_in, marg_in] = signal_spectral_marginal(f0);
  CHECK(effective_width(faxis_in, marg_in) == doctest::Approx(1.0).epsilon(1e-6));

  // first-order upconverted spectrum: quadrature sum of the bandwidths
  const auto [faxis, marg] = signal_spectral_marginal(f3);
  CHECK(effective_width(faxis, marg) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("strong compression beats the first-order width prediction") {
  const double p = analytic::optimal_p_refined(1.0, 0.0).p;
  const double ratio = figures::width_ratio_cell(1.0, 1.0, p, 8192, 128);
  CHECK(ratio < 1.0);
  CHECK(ratio == doctest::Approx(0.86268).epsilon(5e-3));
}

TEST_CASE("grid fidelity basics and analytic agreement") {
  const auto pt = canonical_point(2.0, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 512, 128);
  CHECK(grid_fidelity(f0, f0) == doctest::Approx(1.0).epsilon(1e-12));

  // orthogonal supports
  JointGrid shifted = f0;
  shifted.data.setZero();
  const int half = f0.axis_a.n / 2;
  shifted.data.topRows(8) = f0.data.middleRows(half - 4, 8);
  CHECK(grid_fidelity(shifted, f0) <= 1e-6);

  // fidelity of full vs first-order waveforms, grid route vs quadrature
  const double p_hat = 3.46024252881391;
  const auto opt = canonical_point(p_hat, 1.0, 0.0);
  const JointGrid f0o = time_grid_for(opt, 1024, 256);
  const EscortGrid go = escort_time_grid(opt.escort, f0o.axis_a);
  const auto [f1o, f3o] = closed_form_upconvert(f0o, go, opt.gamma);
  const auto [f1f, f3f] = recursion_upconvert(f0o, go, opt.gamma, 1);
  const double fid_grid = grid_fidelity(f3o, f3f);
  const double fid_quad =
      analytic::fidelity_first_order(opt.photon, opt.escort, opt.gamma);
  CHECK(fid_grid == doctest::Approx(fid_quad).epsilon(1e-4));

  // delay reshapes the waveform: fidelity strictly below one
  const auto delayed = canonical_point(p_hat, 1.0, 2.0);
  const double fid_delayed =
      analytic::fidelity_first_order(delayed.photon, delayed.escort,
                                     delayed.gamma);
  CHECK(fid_delayed < 1.0);
  const JointGrid f0d = time_grid_for(delayed, 1024, 256);
  const EscortGrid gd = escort_time_grid(delayed.escort, f0d.axis_a);
  const auto [f1d, f3d] = closed_form_upconvert(f0d, gd, delayed.gamma);
  const auto [f1d1, f3d1] = recursion_upconvert(f0d, gd, delayed.gamma, 1);
  CHECK(grid_fidelity(f3d, f3d1) == doctest::Approx(fid_delayed).epsilon(1e-4));
}

TEST_CASE("spectral chirp application: inverse pair and broadening") {
  // wide time axis so the chirp-stretched output still fits the window
  const auto pt = canonical_point(1e-4, 1.0, 0.0);
  const Axis axis_a = symmetric_axis(0.0, 80.0, 2048);
  const Axis axis_h = symmetric_axis(0.0, 5.0, 128);
  const JointGrid f0 = input_time_grid(pt.photon, axis_a, axis_h);
  const EscortGrid g = escort_time_grid(pt.escort, axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, pt.gamma);

  const JointGrid chirped = apply_spectral_chirp(f3, 3.0);
  const JointGrid back = apply_spectral_chirp(chirped, -3.0);
  CHECK((back.data - f3.data).norm() <= 1e-12 * f3.data.norm());

  // a transform-limited sqrt(2)-bandwidth pulse stretches by the known factor
  const auto [ta, marg_t] = signal_temporal_marginal(f3);
  const double w0 = effective_width(ta, marg_t);
  const auto [tc, marg_c] = signal_temporal_marginal(chirped);
  const double wc = effective_width(tc, marg_c);
  const double s3sq = 2.0;  // spectral variance of the upconverted signal
  const double expected = std::sqrt(1.0 + 16.0 * 9.0 * s3sq * s3sq) * w0;
  CHECK(wc == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("temporal imaging: measured width ratio is |A3/A1|") {
  // exact Gaussian-chain algebra: with the imaging condition satisfied the
  // image-to-object width ratio is |A3/A1| in every regime (the design
  // module reports M = -A1/A3, which coincides with it only when
  // |A1| = |A3|); the oracle pipeline must reproduce the |A3/A1| ratio
  const double A1 = 2.0, A2 = -25.0, s2 = 1.0;
  PhotonSpec photon;
  photon.A1 = A1;
  EscortSpec escort;
  escort.sigma2 = s2;
  escort.A2 = A2;
  const double B = -4.0 * A2 * std::pow(s2, 4.0) /
                   (1.0 + 16.0 * A2 * A2 * std::pow(s2, 4.0));
  const double A3 = 1.0 / (4.0 * B - 1.0 / A1);
  const double gamma = gamma_for_p(1.0, escort);
  const Axis axis_a =
      symmetric_axis(0.0, 10.0 * escort_temporal_width(escort), 8192);
  const Axis axis_h = symmetric_axis(0.0, 5.0, 64);
  const JointGrid f0 = input_time_grid(photon, axis_a, axis_h);
  const EscortGrid g = escort_time_grid(escort, axis_a);
  const auto [f1, f3] = closed_form_upconvert(f0, g, gamma);
  const JointGrid imaged = apply_spectral_chirp(f3, A3);
  const auto [taxis, marginal] = signal_temporal_marginal(imaged);
  const double w_out = effective_width(taxis, marginal);
  const double w_in = 0.5;  // unchirped sigma1 = 1 photon
  CHECK(w_out / w_in ==
        doctest::Approx(std::abs(A3 / A1)).epsilon(5e-3));
}

TEST_CASE("grid CSV snapshot") {
  const auto pt = canonical_point(1.0, 1.0, 0.0);
  const JointGrid f0 = time_grid_for(pt, 128, 64);
  const std::string path = "grid_snapshot_test.csv";
  write_grid_csv(f0, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# domain=", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3 + 128 * 64);  // two more axis comments, header, data
  std::remove(path.c_str());
}
