#ifndef SFG_NUMERICS_HPP
#define SFG_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "sfg/types.hpp"

namespace sfg::numerics {

/// Compensated (Kahan) accumulator for alternating series with large
/// intermediate terms.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// --- Gauss-Kronrod 7-15 panel rule -----------------------------------------

namespace detail {

// QUADPACK abscissae/weights on [-1, 1]; nodes are symmetric about 0.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss-7 weights for nodes 1, 3, 5, 7 of the Kronrod set.
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <typename T>
double magnitude(T v) {
  if constexpr (std::is_same_v<T, std::complex<double>>)
    return std::abs(v);
  else
    return std::abs(static_cast<double>(v));
}

template <typename F, typename T>
void gk15(F&& f, double a, double b, T& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T ik{}, ig{};
  for (int i = 0; i < 7; ++i) {
    const double x = kKronrodNodes[i];
    const T fs = f(c + h * x) + f(c - h * x);
    ik += kKronrodWeights[i] * fs;
    if (i % 2 == 1) ig += kGaussWeights[i / 2] * fs;
  }
  const T f0 = f(c);
  ik += kKronrodWeights[7] * f0;
  ig += kGaussWeights[3] * f0;
  kronrod = h * ik;
  err = magnitude<T>(h * (ik - ig));
}

}  // namespace detail

struct PanelStats {
  double error = 0.0;
  int panels = 0;
};

/// Globally adaptive 1-D integration with an absolute tolerance. Optional
/// breakpoints seed the initial panel set so that narrow features the
/// caller knows about are not missed by the error estimator.
template <typename T, typename F>
T integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-9,
                     std::vector<double> breakpoints = {},
                     int max_panels = 8000, PanelStats* stats = nullptr) {
  struct Panel {
    double a, b, err;
    T val;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  std::priority_queue<Panel> heap;
  T total{};
  double total_err = 0.0;
  int n_panels = 0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i], hi = breakpoints[i + 1];
    if (!(lo >= a && hi <= b) || !(hi > lo)) continue;
    Panel pl{lo, hi, 0.0, T{}};
    detail::gk15(f, lo, hi, pl.val, pl.err);
    total += pl.val;
    total_err += pl.err;
    heap.push(pl);
    ++n_panels;
  }
  while (total_err > abs_tol && n_panels < max_panels && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    total -= worst.val;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    for (auto [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      Panel pl{lo, hi, 0.0, T{}};
      detail::gk15(f, lo, hi, pl.val, pl.err);
      total += pl.val;
      total_err += pl.err;
      heap.push(pl);
    }
    ++n_panels;
  }
  if (stats) {
    stats->error = total_err;
    stats->panels = n_panels;
  }
  return total;
}

/// Globally adaptive 2-D integration on a rectangle with a tensor GK15 rule.
/// Panels with the largest error estimate are split in their longer
/// direction (relative to the initial aspect).
template <typename T, typename F>
T integrate2d_adaptive(F&& f, double ax, double bx, double ay, double by,
                       double abs_tol = 1e-9,
                       std::vector<double> x_breaks = {},
                       std::vector<double> y_breaks = {},
                       int max_panels = 40000, PanelStats* stats = nullptr) {
  using detail::kGaussWeights;
  using detail::kKronrodNodes;
  using detail::kKronrodWeights;

  auto tensor = [&f](double xa, double xb, double ya, double yb, T& val,
                     double& err) {
    const double cx = 0.5 * (xa + xb), hx = 0.5 * (xb - xa);
    const double cy = 0.5 * (ya + yb), hy = 0.5 * (yb - ya);
    double xs[15], wxk[15], wxg[15], ys[15], wyk[15], wyg[15];
    for (int i = 0; i < 8; ++i) {
      const int j = 14 - i;
      xs[i] = cx - hx * kKronrodNodes[i];
      xs[j] = cx + hx * kKronrodNodes[i];
      wxk[i] = wxk[j] = kKronrodWeights[i];
      wxg[i] = wxg[j] = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
      ys[i] = cy - hy * kKronrodNodes[i];
      ys[j] = cy + hy * kKronrodNodes[i];
      wyk[i] = wyk[j] = kKronrodWeights[i];
      wyg[i] = wyg[j] = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
    }
    wxg[7] = kGaussWeights[3];
    wyg[7] = kGaussWeights[3];
    T ik{}, ig{};
    for (int i = 0; i < 15; ++i) {
      T row_k{}, row_g{};
      for (int j = 0; j < 15; ++j) {
        const T fv = f(xs[i], ys[j]);
        row_k += wyk[j] * fv;
        if (wyg[j] != 0.0) row_g += wyg[j] * fv;
      }
      ik += wxk[i] * row_k;
      if (wxg[i] != 0.0) ig += wxg[i] * row_g;
    }
    val = hx * hy * ik;
    err = detail::magnitude<T>(hx * hy * (ik - ig));
  };

  struct Panel {
    double xa, xb, ya, yb, err;
    T val;
    bool operator<(const Panel& o) const { return err < o.err; }
  };

  auto prep = [](std::vector<double>& v, double lo, double hi) {
    v.push_back(lo);
    v.push_back(hi);
    std::sort(v.begin(), v.end());
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](double x) { return x < lo || x > hi; }),
            v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  prep(x_breaks, ax, bx);
  prep(y_breaks, ay, by);

  std::priority_queue<Panel> heap;
  T total{};
  double total_err = 0.0;
  int n_panels = 0;
  for (size_t i = 0; i + 1 < x_breaks.size(); ++i)
    for (size_t j = 0; j + 1 < y_breaks.size(); ++j) {
      Panel pl{x_breaks[i], x_breaks[i + 1], y_breaks[j], y_breaks[j + 1],
               0.0, T{}};
      tensor(pl.xa, pl.xb, pl.ya, pl.yb, pl.val, pl.err);
      total += pl.val;
      total_err += pl.err;
      heap.push(pl);
      ++n_panels;
    }
  while (total_err > abs_tol && n_panels < max_panels && !heap.empty()) {
    Panel w = heap.top();
    heap.pop();
    total -= w.val;
    total_err -= w.err;
    const bool split_x = (w.xb - w.xa) >= (w.yb - w.ya);
    Panel h1 = w, h2 = w;
    if (split_x) {
      const double mid = 0.5 * (w.xa + w.xb);
      h1.xb = mid;
      h2.xa = mid;
    } else {
      const double mid = 0.5 * (w.ya + w.yb);
      h1.yb = mid;
      h2.ya = mid;
    }
    for (Panel* pl : {&h1, &h2}) {
      tensor(pl->xa, pl->xb, pl->ya, pl->yb, pl->val, pl->err);
      total += pl->val;
      total_err += pl->err;
      heap.push(*pl);
    }
    ++n_panels;
  }
  if (stats) {
    stats->error = total_err;
    stats->panels = n_panels;
  }
  return total;
}

/// Golden-section maximization on [a, b]; assumes a single interior maximum
/// within the bracket. Returns the abscissa of the maximum.
template <typename F>
double golden_section_max(F&& f, double a, double b, double tol = 1e-10) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace sfg::numerics

#endif  // SFG_NUMERICS_HPP
