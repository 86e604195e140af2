// sfg: simulation and verification toolkit for high-efficiency
// sum-frequency conversion of single-photon waveforms.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sfg/analytic.hpp"
#include "sfg/design.hpp"
#include "sfg/figures.hpp"
#include "sfg/model.hpp"
#include "sfg/sweep.hpp"
#include "sfg/verify.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-frequency single-photon waveform conversion toolkit"};
  app.require_subcommand(1);

  // fig2 / fig3 / fig4
  std::string panel = "a", out_path, config_path;
  auto* fig2 = app.add_subcommand("fig2", "Efficiency and fidelity maps");
  fig2->add_option("--panel", panel, "Panel: a, b, c or d")->required();
  fig2->add_option("--out", out_path, "Output CSV path")->required();
  fig2->add_option("--config", config_path, "JSON config overriding defaults");

  std::string panel3 = "a", out3, config3;
  auto* fig3 = app.add_subcommand("fig3", "Bandwidth-compression maps");
  fig3->add_option("--panel", panel3, "Panel: a or b")->required();
  fig3->add_option("--out", out3, "Output CSV path")->required();
  fig3->add_option("--config", config3, "JSON config overriding defaults");

  std::string out4, config4;
  auto* fig4 = app.add_subcommand("fig4", "Renyi 2-entropy transfer curves");
  fig4->add_option("--out", out4, "Output CSV path")->required();
  fig4->add_option("--config", config4, "JSON config overriding defaults");

  // design
  auto* design_cmd = app.add_subcommand("design", "Dispersion-design solvers");
  design_cmd->require_subcommand(1);
  double a1 = 1.0, a2 = -25.0, sigma1 = 1.0, sigma2 = 1.0, chirp = 5.0;
  auto* lens = design_cmd->add_subcommand("lens", "Time-lens output chirp");
  lens->add_option("--a1", a1, "Input chirp A1 [ps^2]")->required();
  lens->add_option("--a2", a2, "Escort chirp A2 [ps^2]")->required();
  lens->add_option("--sigma2", sigma2, "Escort bandwidth [rad/ps]")
      ->required();
  auto* t2f =
      design_cmd->add_subcommand("t2f", "Time-to-frequency converter chirp");
  t2f->add_option("--a2", a2, "Escort chirp A2 [ps^2]")->required();
  t2f->add_option("--sigma2", sigma2, "Escort bandwidth [rad/ps]")->required();
  auto* compress =
      design_cmd->add_subcommand("compress", "First-order compressed width");
  compress->add_option("--sigma1", sigma1, "Photon bandwidth [rad/ps]")
      ->required();
  compress->add_option("--sigma2", sigma2, "Escort bandwidth [rad/ps]")
      ->required();
  compress->add_option("--chirp", chirp, "Chirp A (A1 = -A2 = A) [ps^2]")
      ->required();

  // waveform snapshot
  std::string photon_path, escort_path, wf_mode = "upconverted", wf_out;
  double wf_gamma = 1.0;
  int wf_na = 512, wf_nh = 128;
  auto* waveform_cmd = app.add_subcommand(
      "waveform", "Sample a two-photon waveform and export the grid as CSV");
  waveform_cmd->add_option("--photon", photon_path,
                           "Photon record JSON file (defaults if omitted)");
  waveform_cmd->add_option("--escort", escort_path,
                           "Escort record JSON file (defaults if omitted)");
  waveform_cmd->add_option("--gamma", wf_gamma, "Coupling gamma [sqrt(ps)]");
  waveform_cmd->add_option("--mode", wf_mode,
                           "input, remaining or upconverted");
  waveform_cmd->add_option("--na", wf_na, "Signal-axis points (power of two)");
  waveform_cmd->add_option("--nh", wf_nh, "Herald-axis points (power of two)");
  waveform_cmd->add_option("--out", wf_out, "Output CSV path")->required();

  // sweep
  std::string sweep_config;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep from JSON");
  sweep_cmd->add_option("--config", sweep_config, "SweepConfig JSON file")
      ->required();

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the oracle-vs-analytic suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fig2) {
      sfg::figures::fig2(panel.at(0), load_config(config_path), out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (*fig3) {
      sfg::figures::fig3(panel3.at(0), load_config(config3), out3);
      std::cout << "wrote " << out3 << "\n";
    } else if (*fig4) {
      sfg::figures::fig4(load_config(config4), out4);
      std::cout << "wrote " << out4 << "\n";
    } else if (*lens) {
      const auto d = sfg::design::solve_time_lens(a1, a2, sigma2);
      nlohmann::json j = {{"A1", d.A1},
                          {"A2", d.A2},
                          {"A3", d.A3},
                          {"sigma2", d.sigma2},
                          {"B", d.B},
                          {"magnification", d.magnification},
                          {"lcl_ratio", d.lcl_ratio},
                          {"large_chirp_limit", d.lcl_ratio >= 1e4}};
      std::cout << j.dump(2) << "\n";
    } else if (*t2f) {
      const double a1_needed = sfg::design::time_to_frequency_chirp(a2, sigma2);
      const double lcl = 16.0 * a2 * a2 * std::pow(sigma2, 4.0);
      nlohmann::json j = {{"A2", a2},
                          {"sigma2", sigma2},
                          {"A1", a1_needed},
                          {"A3", a1_needed},
                          {"lcl_ratio", lcl},
                          {"large_chirp_limit", lcl >= 1e4}};
      std::cout << j.dump(2) << "\n";
    } else if (*compress) {
      const double s3 = sfg::design::compressed_bandwidth_first_order(
          sigma1, sigma2, chirp);
      nlohmann::json j = {{"sigma1", sigma1},
                          {"sigma2", sigma2},
                          {"A", chirp},
                          {"sigma3_first_order", s3},
                          {"compression_factor",
                           std::hypot(sigma1, sigma2) / s3}};
      std::cout << j.dump(2) << "\n";
    } else if (*waveform_cmd) {
      const nlohmann::json pj = photon_path.empty() ? nlohmann::json()
                                                    : load_config(photon_path);
      const nlohmann::json ej = escort_path.empty() ? nlohmann::json()
                                                    : load_config(escort_path);
      sfg::figures::waveform_csv(pj, ej, wf_gamma, wf_mode, wf_na, wf_nh,
                                 wf_out);
      std::cout << "wrote " << wf_out << "\n";
    } else if (*sweep_cmd) {
      const auto cfg = sfg::sweep::parse_sweep_config(load_config(sweep_config));
      sfg::sweep::run_sweep(cfg);
      std::cout << "wrote " << cfg.output_path << "\n";
    } else if (*verify_cmd) {
      const auto results = sfg::verify::run_all();
      return sfg::verify::report(results, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
