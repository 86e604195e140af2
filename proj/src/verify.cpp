#include "sfg/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <ostream>
#include <random>

#include "sfg/analytic.hpp"
#include "sfg/design.hpp"
#include "sfg/figures.hpp"
#include "sfg/model.hpp"
#include "sfg/numerics.hpp"
#include "sfg/oracle.hpp"
#include "sfg/sweep.hpp"

namespace sfg::verify {

namespace {

using namespace sfg::analytic;
using oracle::Axis;
using oracle::EscortGrid;
using oracle::JointGrid;

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

/// Escort bandwidth realizing a target q at the given photon/escort chirps
/// (sigma1 = sigma_h = 1, S = 1e9). Reduces the target when the chirp pair
/// cannot reach it with a real bandwidth.
double sigma2_for_q(double& q, double A1, double A2) {
  const PhotonSpec ph;  // sigma1 = sigma_h = 1, S = 1e9
  const double Ssq = ph.S * ph.S;
  const double b = 1.0 + 1.0 / Ssq + 16.0 * A1 * A1 * (Ssq + 1.0) /
                                          (Ssq + 2.0);
  if (A2 == 0.0) return std::sqrt(q / b);
  const double q_cap = b / (8.0 * std::abs(A2));
  if (q > 0.99 * q_cap) q = 0.99 * q_cap;
  const double disc = b * b - 64.0 * q * q * A2 * A2;
  const double s2sq = (b - std::sqrt(disc)) / (32.0 * q * A2 * A2);
  return std::sqrt(s2sq);
}

struct GridCase {
  PhysicalPoint phys;
  JointGrid f0;
  EscortGrid g;
};

GridCase build_case(double p, double q, double T, int n_a, int n_h) {
  GridCase c;
  c.phys = canonical_point(p, q, T);
  auto [axis_a, axis_h] =
      oracle::default_axes(c.phys.photon, c.phys.escort, n_a, n_h);
  c.f0 = oracle::input_time_grid(c.phys.photon, axis_a, axis_h);
  c.g = oracle::escort_time_grid(c.phys.escort, axis_a);
  return c;
}

// --- criterion 1: pointwise unitarity + norm --------------------------------

CriterionResult criterion1() {
  CriterionResult r{1, "unitarity"};
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  double worst_point = 0.0, worst_norm = 0.0;
  std::vector<std::array<double, 5>> draws(50);
  for (auto& d : draws) {
    d[0] = 6.0 * u01(rng);                                // p
    d[1] = std::pow(10.0, -4.0 + 8.0 * u01(rng));          // q (log-uniform)
    d[2] = -3.0 + 6.0 * u01(rng);                          // T
    d[3] = -20.0 + 40.0 * u01(rng);                        // A1
    d[4] = -20.0 + 40.0 * u01(rng);                        // A2
  }
  std::vector<std::array<double, 2>> point_norm(50);

  sweep::parallel_for(50, [&](int i) {
    auto [p, q, T, A1, A2] = draws[i];
    PhotonSpec photon;
    photon.A1 = A1;
    EscortSpec escort;
    escort.A2 = A2;
    escort.sigma2 = sigma2_for_q(q, A1, A2);
    const double z2sq = 1.0 + 16.0 * A2 * A2 * std::pow(escort.sigma2, 4.0);
    escort.tau = T * std::sqrt(z2sq) / (std::sqrt(2.0) * escort.sigma2);
    const double gamma = gamma_for_p(p, escort);

    WaveformEvaluator wf(photon, escort, gamma);
    const auto widths = temporal_widths(photon);
    const double w2 = escort_temporal_width(escort);
    std::mt19937 local(1000 + i);
    std::uniform_real_distribution<double> pt(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < 40; ++s) {
      const double t = 5.0 * (widths[0] + w2) * pt(local) - escort.tau * 0.5;
      const double th = 5.0 * widths[1] * pt(local);
      const double in = std::norm(wf.input(t, th));
      const double out =
          std::norm(wf.remaining(t, th)) + std::norm(wf.upconverted(t, th));
      if (in > 1e-280)
        worst = std::max(worst, std::abs(out - in) / in);
    }
    const double lx = 12.0 * widths[0], ly = 12.0 * widths[1];
    std::vector<double> xb, yb;
    for (double m : {-3.0, 0.0, 3.0}) {
      xb.push_back(m * widths[0]);
      yb.push_back(m * widths[1]);
    }
    const double total = numerics::integrate2d_adaptive<double>(
        [&](double t, double th) {
          return std::norm(wf.remaining(t, th)) +
                 std::norm(wf.upconverted(t, th));
        },
        -lx, lx, -ly, ly, 1e-9, xb, yb);
    point_norm[i] = {worst, std::abs(total - 1.0)};
  });

  for (const auto& pn : point_norm) {
    worst_point = std::max(worst_point, pn[0]);
    worst_norm = std::max(worst_norm, pn[1]);
  }
  r.pass = worst_point < 1e-12 && worst_norm < 1e-6;
  r.detail = fmt("50 random sets: max pointwise |f1|^2+|f3|^2 vs |fi|^2 "
                 "rel err %.2e (<1e-12), max |norm-1| %.2e (<1e-6)",
                 worst_point, worst_norm);
  return r;
}

// --- criterion 2: recursion vs closed form -----------------------------------

CriterionResult criterion2() {
  CriterionResult r{2, "taylor-sufficiency"};
  const double ps[] = {1.0, 2.0, 4.0};
  const double qs[] = {0.01, 1.0, 100.0};
  const double Ts[] = {0.0, 1.0};
  struct Cell {
    double p, q, T;
  };
  std::vector<Cell> cells;
  for (double p : ps)
    for (double q : qs)
      for (double T : Ts) cells.push_back({p, q, T});

  std::vector<double> errs3(cells.size()), errs1(cells.size());
  sweep::parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const auto [p, q, T] = cells[i];
    GridCase c = build_case(p, q, T, 1024, 256);
    const int K = oracle::recursion_depth(c.g, c.phys.gamma);
    const auto [f1_rec, f3_rec] =
        oracle::recursion_upconvert(c.f0, c.g, c.phys.gamma, K);
    const auto [f1_cf, f3_cf] =
        oracle::closed_form_upconvert(c.f0, c.g, c.phys.gamma);
    errs3[i] = oracle::relative_l2(f3_rec, f3_cf);
    errs1[i] = oracle::relative_l2(f1_rec, f1_cf);
  });
  const double worst3 = *std::max_element(errs3.begin(), errs3.end());
  // the even chain stops one order lower at the same K, so it gets its own
  // commensurate bound
  const double worst1 = *std::max_element(errs1.begin(), errs1.end());
  r.pass = worst3 < 1e-8 && worst1 < 1e-7;
  r.detail = fmt("recursion vs closed form over 18-cell lattice: "
                 "upconverted max relative L2 %.2e (<1e-8), remaining %.2e "
                 "(<1e-7)",
                 worst3, worst1);
  return r;
}

// --- criterion 3: low-q limit --------------------------------------------------

CriterionResult criterion3() {
  CriterionResult r{3, "low-q-limit"};
  const double q = 1e-6;
  double worst = 0.0, worst_p = 0.0, worst_T = 0.0;
  for (int ip = 0; ip <= 32; ++ip) {
    const double p = 2.0 * M_PI * ip / 32.0;
    for (int iT = 0; iT <= 10; ++iT) {
      const double T = 2.0 * iT / 10.0;
      DimensionlessParams d;
      d.p = p;
      d.q = q;
      d.T = T;
      const double dev = std::abs(efficiency(d).value - efficiency_low_q(p, T));
      if (dev > worst) {
        worst = dev;
        worst_p = p;
        worst_T = T;
      }
    }
  }
  DimensionlessParams unit;
  unit.p = M_PI;
  unit.q = 1e-6;
  unit.T = 0.0;
  const double at_pi = efficiency(unit).value;
  const bool clause1 = worst < 1e-6;
  const bool clause2 = std::abs(at_pi - 1.0) < 1e-5;
  r.pass = clause1 && clause2;
  r.detail = fmt("max |series - sin^2| %.3e at (p=%.3f, T=%.1f) (<1e-6 %s); "
                 "eff(pi,1e-6,0)=%.8f (1 +- 1e-5 %s)",
                 worst, worst_p, worst_T, clause1 ? "ok" : "VIOLATED",
                 at_pi, clause2 ? "ok" : "VIOLATED");
  if (!clause1)
    r.detail += fmt("; note: the deviation from the q->0 limit is q*C(p,T) "
                    "with max C ~ 1.73 on this domain, so the bound is "
                    "reachable only for q <= 5.8e-7");
  return r;
}

// --- criterion 4: compression ceiling ------------------------------------------

CriterionResult criterion4() {
  CriterionResult r{4, "compression-ceiling"};
  const double chirps[] = {1.0, 5.0, 20.0, 100.0};
  double lo = 2.0, hi = -1.0, lo_ref = 2.0, hi_ref = -1.0;
  for (double A : chirps) {
    // full physical chain: chirped spectra -> dimensionless -> series
    const PhysicalPoint probe = compression_point(1.0, A);
    const DimensionlessParams base =
        reduce(probe.photon, probe.escort, probe.gamma);
    const double p_hat = optimal_p_estimate(base.q, base.T);
    const PhysicalPoint at_peak = compression_point(p_hat, A);
    const double eff =
        efficiency(reduce(at_peak.photon, at_peak.escort, at_peak.gamma))
            .value;
    lo = std::min(lo, eff);
    hi = std::max(hi, eff);
    const OptimalPoint refined = optimal_p_refined(base.q, base.T);
    lo_ref = std::min(lo_ref, refined.efficiency);
    hi_ref = std::max(hi_ref, refined.efficiency);
  }
  const bool in_band = std::abs(lo - 0.887) <= 0.002 &&
                       std::abs(hi - 0.887) <= 0.002;
  const bool chirp_independent = (hi - lo) < 1e-12 && (hi_ref - lo_ref) < 1e-12;
  r.pass = in_band && chirp_independent;
  r.detail = fmt("optimal efficiency at the four-term estimate: %.6f "
                 "(0.887 +- 0.002), spread over A in {1,5,20,100}: %.1e; "
                 "unconstrained series max: %.6f (reported, not gated)",
                 hi, hi - lo, hi_ref);
  return r;
}

// --- criterion 5: fidelity floor ------------------------------------------------

CriterionResult criterion5() {
  CriterionResult r{5, "fidelity-floor"};
  const double qs[] = {1e-3, 1e-1, 1.0, 10.0, 1e3};
  std::vector<double> fids(5);
  sweep::parallel_for(5, [&](int i) {
    const double q = qs[i];
    const double p_hat = optimal_p_estimate(q, 0.0);
    const PhysicalPoint phys = canonical_point(p_hat, q, 0.0);
    fids[i] = fidelity_first_order(phys.photon, phys.escort, phys.gamma);
  });
  const double min_fid = *std::min_element(fids.begin(), fids.end());
  const bool floor_ok = min_fid >= 0.95;
  const bool low_q_ok = fids[0] >= 1.0 - 1e-4;
  r.pass = floor_ok && low_q_ok;
  r.detail = fmt("fidelity at estimated optimum, T=0: min %.6f over "
                 "q in {1e-3..1e3} (>=0.95); q=1e-3: %.8f (1 - <1e-4)",
                 min_fid, fids[0]);
  return r;
}

// --- criterion 6: width ratio ---------------------------------------------------

CriterionResult criterion6() {
  CriterionResult r{6, "width-ratio"};
  // low-q cells (q <= 0.01), tau = 0, at the refined optimal coupling
  const double low_q_cells[][2] = {{1e-3, 5e-3}, {1e-3, 1e-2}, {2e-3, 1e-2}};
  double worst_dev = 0.0;
  for (const auto& cell : low_q_cells) {
    const double p = optimal_p_refined(cell[1], 0.0).p;
    const double ratio =
        figures::width_ratio_cell(cell[0], cell[1], p, 4096, 128);
    worst_dev = std::max(worst_dev, std::abs(ratio - 1.0));
  }
  const bool low_q_ok = worst_dev <= 0.01;

  // sigma1 = sigma2, A = 5: full-order spectrum narrower than first order
  const double p_eq = optimal_p_refined(1.0, 0.0).p;
  const double ratio_eq = figures::width_ratio_cell(1.0, 1.0, p_eq, 8192, 128);
  const bool narrower = ratio_eq < 1.0;

  r.pass = low_q_ok && narrower;
  r.detail = fmt("low-q (q<=0.01) max |ratio-1| %.4f (<=0.01); "
                 "sigma1=sigma2, A=5: ratio %.4f (<1)",
                 worst_dev, ratio_eq);
  return r;
}

// --- criterion 7: entanglement --------------------------------------------------

CriterionResult criterion7() {
  CriterionResult r{7, "entanglement"};
  // identity at low q over an S sweep spanning input renyi2 in [0, 2]
  const double q_low = 1e-3;
  const double p_low = optimal_p_refined(q_low, 0.0).p;
  double worst_identity = 0.0;
  for (int i = 0; i <= 14; ++i) {
    const double S = std::pow(10.0, -1.0159 + 4.0 * i / 14.0);  // ~0.0964..1e3
    const double rin = input_purity(S, 1.0, 1.0).renyi2;
    const double rout = upconverted_purity(S, 1.0, 1.0, p_low, q_low).renyi2;
    worst_identity = std::max(worst_identity, std::abs(rout - rin));
  }
  const bool identity_ok = worst_identity < 1e-2;

  // series vs grid purity at spot points; output never above input
  const double spots[][2] = {
      {1e-3, 1.0}, {1.0, 1.0}, {10.0, 1.0}, {1.0, 0.5}, {10.0, 3.0}};
  double worst_grid = 0.0;
  bool never_above = true;
  std::vector<double> devs(5);
  std::vector<bool> below(5);
  sweep::parallel_for(5, [&](int i) {
    const double q = spots[i][0], S = spots[i][1];
    const double p = optimal_p_refined(q, 0.0).p;
    PhotonSpec photon;
    photon.S = S;
    EscortSpec escort;
    escort.sigma2 = std::sqrt(q / (1.0 + 1.0 / (S * S)));
    const double gamma = gamma_for_p(p, escort);
    auto [axis_a, axis_h] = oracle::default_axes(photon, escort, 1024, 1024);
    const JointGrid f0 = oracle::input_time_grid(photon, axis_a, axis_h);
    const EscortGrid g = oracle::escort_time_grid(escort, axis_a);
    const auto [f1, f3] = oracle::closed_form_upconvert(f0, g, gamma);
    const double grid = oracle::grid_purity(f3);
    const PurityResult series = upconverted_purity(S, 1.0, 1.0, p, q);
    devs[i] = std::abs(grid - series.purity);
    below[i] = series.renyi2 <= input_purity(S, 1.0, 1.0).renyi2 + 1e-12;
  });
  for (int i = 0; i < 5; ++i) {
    worst_grid = std::max(worst_grid, devs[i]);
    never_above = never_above && below[i];
  }
  const bool grid_ok = worst_grid < 1e-3;

  r.pass = identity_ok && grid_ok && never_above;
  r.detail = fmt("low-q identity: max |renyi_out - renyi_in| %.2e (<1e-2); "
                 "series vs grid purity: max |diff| %.2e (<1e-3) over 5 "
                 "spots; output <= input at all points: %s",
                 worst_identity, worst_grid, never_above ? "yes" : "NO");
  return r;
}

// --- criterion 8: efficiency agreement ------------------------------------------

CriterionResult criterion8() {
  CriterionResult r{8, "efficiency-agreement"};
  const double ps[] = {1.0, 2.0, 4.0};
  const double qs[] = {0.01, 1.0, 100.0};
  const double Ts[] = {0.0, 1.0};
  struct Cell {
    double p, q, T;
  };
  std::vector<Cell> cells;
  for (double p : ps)
    for (double q : qs)
      for (double T : Ts) cells.push_back({p, q, T});
  std::vector<double> errs(cells.size());
  sweep::parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const auto [p, q, T] = cells[i];
    GridCase c = build_case(p, q, T, 1024, 256);
    const auto [f1, f3] =
        oracle::closed_form_upconvert(c.f0, c.g, c.phys.gamma);
    const double grid = oracle::grid_efficiency(f3);
    const double series =
        efficiency(reduce(c.phys.photon, c.phys.escort, c.phys.gamma)).value;
    errs[i] = std::abs(grid - series);
  });
  const double worst = *std::max_element(errs.begin(), errs.end());

  // doubling gate on a sentinel cell
  double eff_n, eff_2n;
  {
    GridCase c = build_case(2.0, 1.0, 1.0, 1024, 256);
    const auto [f1, f3] =
        oracle::closed_form_upconvert(c.f0, c.g, c.phys.gamma);
    eff_n = oracle::grid_efficiency(f3);
    GridCase d = build_case(2.0, 1.0, 1.0, 2048, 512);
    const auto [f1d, f3d] =
        oracle::closed_form_upconvert(d.f0, d.g, d.phys.gamma);
    eff_2n = oracle::grid_efficiency(f3d);
  }
  const double doubling = std::abs(eff_n - eff_2n);
  r.pass = worst < 1e-6 && doubling < 1e-6;
  r.detail = fmt("series vs grid over 18-cell lattice: max |diff| %.2e "
                 "(<1e-6); grid-doubling shift %.2e (<1e-6)",
                 worst, doubling);
  return r;
}

// --- criterion 9: design solvers ------------------------------------------------

CriterionResult criterion9() {
  CriterionResult r{9, "design-solvers"};
  // imaging-condition residual across a parameter sweep
  double worst_res = 0.0;
  for (double A1 : {0.5, 2.0, 10.0, -7.0})
    for (double A2 : {-25.0, -100.0, 40.0})
      for (double s2 : {0.5, 1.0, 2.0}) {
        try {
          const auto lens = design::solve_time_lens(A1, A2, s2);
          const double res = std::abs(0.5 / lens.A1 + 0.5 / lens.A3 -
                                      2.0 * lens.B);
          worst_res = std::max(worst_res, res);
        } catch (const afocal_error&) {
          // legitimate afocal combination; not part of the residual check
        }
      }
  const bool residual_ok = worst_res < 1e-12;

  // time-to-frequency chirp approaches -A2 in the large-chirp limit
  const double t2f = design::time_to_frequency_chirp(-25.0, 1.0);
  const double t2f_err = std::abs(t2f - 25.0) / 25.0;
  const bool t2f_ok = t2f_err < 1e-3;

  // end-to-end magnification through the oracle, on the symmetric imaging
  // locus |A1| = |A3| where the imaged width equals |M| w_in for either
  // reading of the magnification ratio
  const double A1 = 2.0, A2 = -1.0, s2 = 21.0;
  const auto lens = design::solve_time_lens(A1, A2, s2);
  PhotonSpec photon;
  photon.A1 = A1;
  EscortSpec escort;
  escort.sigma2 = s2;
  escort.A2 = A2;
  const DimensionlessParams dl = reduce(photon, escort, 1.0);
  const double gamma = gamma_for_p(1.0, escort);
  const Axis axis_a = oracle::symmetric_axis(
      0.0, 8.5 * escort_temporal_width(escort), 65536);
  const Axis axis_h = oracle::symmetric_axis(0.0, 5.0, 64);
  const JointGrid f0 = oracle::input_time_grid(photon, axis_a, axis_h);
  const EscortGrid g = oracle::escort_time_grid(escort, axis_a);
  const auto [f1, f3] = oracle::closed_form_upconvert(f0, g, gamma);
  const JointGrid imaged = oracle::apply_spectral_chirp(f3, lens.A3);
  const auto [taxis, marginal] = oracle::signal_temporal_marginal(imaged);
  const double w_out = oracle::effective_width(taxis, marginal);
  PhotonSpec unchirped;
  const double w_in = temporal_widths(unchirped)[0];
  const double mag_err =
      std::abs(w_out / w_in - std::abs(lens.magnification)) /
      std::abs(lens.magnification);
  const bool mag_ok = mag_err < 0.02;

  r.pass = residual_ok && t2f_ok && mag_ok;
  r.detail = fmt("imaging residual max %.1e (<1e-12); t2f chirp vs -A2: "
                 "%.2e rel (<1e-3 at lcl 1e4); oracle magnification %.2e rel "
                 "from |M|=%.4f (<0.02, lcl=%.0f, q=%.1e)",
                 worst_res, t2f_err, mag_err, std::abs(lens.magnification),
                 lens.lcl_ratio, dl.q);
  return r;
}

template <typename F>
CriterionResult timed(F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = fn();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_all() {
  std::vector<CriterionResult> results;
  results.push_back(timed(criterion1));
  results.push_back(timed(criterion2));
  results.push_back(timed(criterion3));
  results.push_back(timed(criterion4));
  results.push_back(timed(criterion5));
  results.push_back(timed(criterion6));
  results.push_back(timed(criterion7));
  results.push_back(timed(criterion8));
  results.push_back(timed(criterion9));

  CriterionResult total{10, "end-to-end"};
  double seconds = 0.0;
  int failures = 0;
  for (const auto& r : results) {
    seconds += r.seconds;
    failures += r.pass ? 0 : 1;
  }
  total.seconds = seconds;
  const bool under_budget = seconds < 600.0;
  total.pass = under_budget && failures == 0;
  total.detail = fmt("criteria 1-9 in %.1f s (<600 s %s); %d criterion%s "
                     "failed%s",
                     seconds, under_budget ? "ok" : "VIOLATED", failures,
                     failures == 1 ? "" : "s",
                     failures ? " => nonzero exit" : "");
  results.push_back(total);
  return results;
}

int report(const std::vector<CriterionResult>& results, std::ostream& os) {
  int failures = 0;
  double seconds = 0.0;
  for (const auto& r : results) {
    os << (r.pass ? "[PASS] " : "[FAIL] ") << "C" << r.id << " " << r.name
       << " (" << fmt("%.1f", r.seconds) << "s): " << r.detail << "\n";
    if (!r.pass) ++failures;
    if (r.id != 10) seconds += r.seconds;
  }
  os << "summary: status="
     << (failures == 0 ? "ok" : "failed") << " passed="
     << results.size() - failures << " failed=" << failures
     << " total=" << results.size() << " seconds=" << fmt("%.1f", seconds)
     << "\n";
  return failures;
}

}  // namespace sfg::verify
