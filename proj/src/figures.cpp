#include "sfg/figures.hpp"

#include <cmath>
#include <vector>

#include "sfg/analytic.hpp"
#include "sfg/design.hpp"
#include "sfg/model.hpp"
#include "sfg/oracle.hpp"
#include "sfg/sweep.hpp"

namespace sfg::figures {

namespace {

using sweep::CsvWriter;

std::vector<double> grid_values(const nlohmann::json& spec, double dmin,
                                double dmax, int dsteps,
                                const std::string& dscale) {
  sweep::AxisSpec ax;
  ax.min = dmin;
  ax.max = dmax;
  ax.steps = dsteps;
  ax.scale = dscale;
  if (spec.is_object()) {
    if (spec.contains("min")) ax.min = spec.at("min").get<double>();
    if (spec.contains("max")) ax.max = spec.at("max").get<double>();
    if (spec.contains("steps")) ax.steps = spec.at("steps").get<int>();
    if (spec.contains("scale")) ax.scale = spec.at("scale").get<std::string>();
  }
  if (ax.steps < 2 || !(ax.min < ax.max))
    throw invalid_parameter("figure config: bad axis specification");
  return ax.values();
}

nlohmann::json sub(const nlohmann::json& cfg, const char* key) {
  return cfg.contains(key) ? cfg.at(key) : nlohmann::json::object();
}

}  // namespace

std::string tool_version() { return "sfg 1.0.0"; }

bool compression_accessible(double q0, double q) {
  if (!(q0 > 0.0) || !(q > 0.0)) return false;
  if (q == q0) return true;  // zero chirp
  // the q = 1/q0 line is the infinite-chirp asymptote
  if (std::abs(q * q0 - 1.0) <= 1e-9 * std::max(1.0, q * q0)) return false;
  const double a_sq = (q0 - q) / (16.0 * q0 * (q * q0 - 1.0));
  return std::isfinite(a_sq) && a_sq >= 0.0;
}

double compression_chirp(double q0, double q) {
  if (!(q0 > 0.0) || !(q > 0.0))
    throw invalid_parameter("compression_chirp: q0 and q must be > 0");
  // sigma1 = 1, sigma2^2 = q0, A1 = -A2 = A:
  //   q = q0 (1 + 16 A^2) / (1 + 16 A^2 q0^2)
  if (q == q0) return 0.0;
  if (!compression_accessible(q0, q))
    throw invalid_parameter(
        "compression_chirp: target q is not reachable with a real chirp "
        "(outside the band between q0 and 1/q0)");
  return std::sqrt((q0 - q) / (16.0 * q0 * (q * q0 - 1.0)));
}

double width_ratio_cell(double q0, double q, double p, int n_a, int n_h) {
  const double chirp = compression_chirp(q0, q);
  PhotonSpec photon;
  photon.sigma1 = 1.0;
  photon.A1 = chirp;
  EscortSpec escort;
  escort.sigma2 = std::sqrt(q0);
  escort.A2 = -chirp;
  const double gamma = gamma_for_p(p, escort);

  // widen the time span so the dual frequency axis resolves the
  // compressed spectrum
  const double sigma31 = design::compressed_bandwidth_first_order(
      photon.sigma1, escort.sigma2, chirp);
  auto [axis_a, axis_h] = oracle::default_axes(photon, escort, n_a, n_h);
  const double need = 2.0 * M_PI / (8.0 * sigma31);  // >= 8 samples per sigma3
  const double have = axis_a.step * axis_a.n;
  if (have < need) {
    const double half = 0.5 * need;
    axis_a = oracle::symmetric_axis(0.0, half, n_a);
  }

  const oracle::JointGrid f0 = oracle::input_time_grid(photon, axis_a, axis_h);
  const oracle::EscortGrid g = oracle::escort_time_grid(escort, axis_a);
  const auto [f1, f3] = oracle::closed_form_upconvert(f0, g, gamma);
  const auto [freq, marginal] = oracle::signal_spectral_marginal(f3);
  const double sigma3 = oracle::effective_width(freq, marginal);
  return sigma3 / sigma31;
}

// --- fig2 ---------------------------------------------------------------------

void fig2(char panel, const nlohmann::json& cfg, const std::string& out) {
  using namespace sfg::analytic;
  CsvWriter csv(out);
  csv.comment("tool", tool_version());
  csv.comment("figure", std::string("2") + panel);

  if (panel == 'a' || panel == 'b') {
    const auto p_values = grid_values(sub(cfg, "p"), 0.0, 2.0 * M_PI, 201,
                                      "linear");
    std::vector<double> families;
    std::string family_name;
    double held = 0.0;
    if (panel == 'a') {
      family_name = "q";
      families = {1e-6, 1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2};
      if (cfg.contains("q_values"))
        families = cfg.at("q_values").get<std::vector<double>>();
      held = cfg.contains("T") ? cfg.at("T").get<double>() : 0.0;
      csv.comment("T", held);
    } else {
      family_name = "T";
      families = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
      if (cfg.contains("T_values"))
        families = cfg.at("T_values").get<std::vector<double>>();
      held = cfg.contains("q") ? cfg.at("q").get<double>() : 1.0;
      csv.comment("q", held);
    }
    for (size_t i = 0; i < families.size(); ++i)
      csv.comment(family_name + std::to_string(i), families[i]);

    const int np = static_cast<int>(p_values.size());
    const int nf = static_cast<int>(families.size());
    std::vector<double> table(np * nf);
    sweep::parallel_for(np * nf, [&](int idx) {
      DimensionlessParams d;
      d.p = p_values[idx / nf];
      if (panel == 'a') {
        d.q = families[idx % nf];
        d.T = held;
      } else {
        d.q = held;
        d.T = families[idx % nf];
      }
      table[idx] = efficiency(d).value;
    });

    std::vector<std::string> cols = {"p"};
    for (double f : families)
      cols.push_back(family_name + "=" + CsvWriter::num(f));
    csv.header(cols);
    for (int i = 0; i < np; ++i) {
      std::vector<std::string> cells = {CsvWriter::num(p_values[i])};
      for (int j = 0; j < nf; ++j)
        cells.push_back(CsvWriter::num(table[i * nf + j]));
      csv.row(cells);
    }
    return;
  }

  if (panel == 'c' || panel == 'd') {
    const auto q_values =
        grid_values(sub(cfg, "q"), 1e-3, 1e3, 61, "log");
    const auto T_values =
        grid_values(sub(cfg, "T"), -3.0, 3.0, 61, "linear");
    const int nq = static_cast<int>(q_values.size());
    const int nT = static_cast<int>(T_values.size());
    std::vector<double> value(nq * nT), p_used(nq * nT);
    std::vector<std::string> status(nq * nT);

    sweep::parallel_for(nq * nT, [&](int idx) {
      const double q = q_values[idx / nT];
      const double T = T_values[idx % nT];
      double p = 0.0;
      std::string st = "ok";
      try {
        p = optimal_p_estimate(q, T);
      } catch (const no_peak_error&) {
        p = optimal_p_refined(q, T).p;
        st = "scan_fallback";
      }
      p_used[idx] = p;
      status[idx] = st;
      if (panel == 'c') {
        DimensionlessParams d;
        d.p = p;
        d.q = q;
        d.T = T;
        value[idx] = efficiency(d).value;
      } else {
        const PhysicalPoint phys = canonical_point(p, q, T);
        value[idx] =
            fidelity_first_order(phys.photon, phys.escort, phys.gamma);
      }
    });

    csv.header({"q", "T", "p_opt",
                panel == 'c' ? "efficiency" : "fidelity", "status"});
    for (int idx = 0; idx < nq * nT; ++idx)
      csv.row({CsvWriter::num(q_values[idx / nT]),
               CsvWriter::num(T_values[idx % nT]), CsvWriter::num(p_used[idx]),
               CsvWriter::num(value[idx]), status[idx]});
    return;
  }

  throw invalid_parameter("fig2: panel must be one of a, b, c, d");
}

// --- fig3 ---------------------------------------------------------------------

void fig3(char panel, const nlohmann::json& cfg, const std::string& out) {
  using namespace sfg::analytic;
  CsvWriter csv(out);
  csv.comment("tool", tool_version());
  csv.comment("figure", std::string("3") + panel);

  if (panel == 'a') {
    std::vector<double> chirps = {1.0, 5.0, 20.0, 100.0};
    if (cfg.contains("chirps"))
      chirps = cfg.at("chirps").get<std::vector<double>>();
    const double p_max = cfg.contains("p_max") ? cfg.at("p_max").get<double>()
                                               : 8.0;
    const int steps = cfg.contains("steps") ? cfg.at("steps").get<int>() : 241;
    csv.comment("sigma1", 1.0);
    csv.comment("sigma2", 1.0);
    csv.comment("config", "A1=-A2=A, tau=0, separable pump");

    const int nc = static_cast<int>(chirps.size());
    std::vector<double> gammas(nc * steps), effs(nc * steps);
    sweep::parallel_for(nc * steps, [&](int idx) {
      const double A = chirps[idx / steps];
      const double p = p_max * (idx % steps) / (steps - 1);
      const PhysicalPoint phys = compression_point(p, A);
      gammas[idx] = phys.gamma;
      effs[idx] = efficiency(reduce(phys.photon, phys.escort, phys.gamma))
                      .value;
    });

    csv.header({"A", "gamma", "p", "efficiency"});
    for (int idx = 0; idx < nc * steps; ++idx) {
      const double p = p_max * (idx % steps) / (steps - 1);
      csv.row({CsvWriter::num(chirps[idx / steps]),
               CsvWriter::num(gammas[idx]), CsvWriter::num(p),
               CsvWriter::num(effs[idx])});
    }
    return;
  }

  if (panel == 'b') {
    const auto q0_values = grid_values(sub(cfg, "q0"), 1e-2, 1e2, 21, "log");
    const auto q_values = grid_values(sub(cfg, "q"), 1e-2, 1e2, 21, "log");
    const int n_a = cfg.contains("n_a") ? cfg.at("n_a").get<int>() : 4096;
    const int n_h = cfg.contains("n_h") ? cfg.at("n_h").get<int>() : 128;
    const int n0 = static_cast<int>(q0_values.size());
    const int n1 = static_cast<int>(q_values.size());
    std::vector<double> ratio(n0 * n1), chirp(n0 * n1);
    std::vector<std::string> status(n0 * n1);

    sweep::parallel_for(n0 * n1, [&](int idx) {
      const double q0 = q0_values[idx / n1];
      const double q = q_values[idx % n1];
      if (!compression_accessible(q0, q)) {
        ratio[idx] = std::nan("");
        chirp[idx] = std::nan("");
        status[idx] = "inaccessible";
        return;
      }
      const double A = compression_chirp(q0, q);
      // first-peak coupling, like the other optimal-efficiency maps
      double p = 0.0;
      std::string st = "ok";
      try {
        p = optimal_p_estimate(q, 0.0);
      } catch (const no_peak_error&) {
        p = optimal_p_refined(q, 0.0).p;
        st = "scan_fallback";
      }
      chirp[idx] = A;
      try {
        ratio[idx] = width_ratio_cell(q0, q, p, n_a, n_h);
        status[idx] = st;
      } catch (const grid_too_small_error&) {
        // extreme chirps near the asymptote outrun the requested grid
        ratio[idx] = std::nan("");
        status[idx] = "unresolved";
      }
    });

    csv.header({"q0", "q", "A", "width_ratio", "status"});
    for (int idx = 0; idx < n0 * n1; ++idx)
      csv.row({CsvWriter::num(q0_values[idx / n1]),
               CsvWriter::num(q_values[idx % n1]), CsvWriter::num(chirp[idx]),
               CsvWriter::num(ratio[idx]), status[idx]});
    return;
  }

  throw invalid_parameter("fig3: panel must be a or b");
}

void waveform_csv(const nlohmann::json& photon_json,
                  const nlohmann::json& escort_json, double gamma,
                  const std::string& mode, int n_a, int n_h,
                  const std::string& out) {
  const PhotonSpec photon =
      photon_json.is_null() ? PhotonSpec{} : photon_json.get<PhotonSpec>();
  const EscortSpec escort =
      escort_json.is_null() ? EscortSpec{} : escort_json.get<EscortSpec>();
  const analytic::WaveformEvaluator wf(photon, escort, gamma);

  auto [axis_a, axis_h] = oracle::default_axes(photon, escort, n_a, n_h);
  oracle::JointGrid grid;
  grid.axis_a = axis_a;
  grid.axis_h = axis_h;
  grid.domain = oracle::Domain::time;
  grid.data.resize(axis_a.n, axis_h.n);
  for (int j = 0; j < axis_h.n; ++j)
    for (int i = 0; i < axis_a.n; ++i) {
      WaveformSample s;
      s.t = axis_a.at(i);
      s.t_h = axis_h.at(j);
      if (mode == "input")
        s.amplitude = wf.input(s.t, s.t_h);
      else if (mode == "remaining")
        s.amplitude = wf.remaining(s.t, s.t_h);
      else if (mode == "upconverted")
        s.amplitude = wf.upconverted(s.t, s.t_h);
      else
        throw invalid_parameter("waveform_csv: unknown mode '" + mode + "'");
      grid.data(i, j) = s.amplitude;
    }
  oracle::write_grid_csv(grid, out);
}

// --- fig4 ---------------------------------------------------------------------

void fig4(const nlohmann::json& cfg, const std::string& out) {
  using namespace sfg::analytic;
  CsvWriter csv(out);
  csv.comment("tool", tool_version());
  csv.comment("figure", "4");

  std::vector<double> q_values = {1e-3, 1.0, 10.0};
  if (cfg.contains("q_values"))
    q_values = cfg.at("q_values").get<std::vector<double>>();
  const auto S_values = grid_values(sub(cfg, "S"), 0.08, 1e3, 41, "log");
  const double s1 =
      cfg.contains("sigma1") ? cfg.at("sigma1").get<double>() : 1.0;
  const double sh =
      cfg.contains("sigma_h") ? cfg.at("sigma_h").get<double>() : 1.0;
  csv.comment("sigma1", s1);
  csv.comment("sigma_h", sh);
  csv.comment("tau", 0.0);

  const int nq = static_cast<int>(q_values.size());
  const int nS = static_cast<int>(S_values.size());
  std::vector<double> p_opt(nq);
  for (int i = 0; i < nq; ++i) p_opt[i] = optimal_p_refined(q_values[i], 0.0).p;

  std::vector<double> r_in(nq * nS), r_out(nq * nS);
  sweep::parallel_for(nq * nS, [&](int idx) {
    const double q = q_values[idx / nS];
    const double S = S_values[idx % nS];
    r_in[idx] = input_purity(S, s1, sh).renyi2;
    r_out[idx] = upconverted_purity(S, s1, sh, p_opt[idx / nS], q).renyi2;
  });

  csv.header({"q", "p_opt", "S", "renyi2_in", "renyi2_out"});
  for (int idx = 0; idx < nq * nS; ++idx)
    csv.row({CsvWriter::num(q_values[idx / nS]),
             CsvWriter::num(p_opt[idx / nS]), CsvWriter::num(S_values[idx % nS]),
             CsvWriter::num(r_in[idx]), CsvWriter::num(r_out[idx])});
}

}  // namespace sfg::figures
