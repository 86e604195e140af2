#ifndef SFG_FIGURES_HPP
#define SFG_FIGURES_HPP

#include <string>

#include "json.hpp"
#include "sfg/types.hpp"

namespace sfg::figures {

std::string tool_version();

/// True when the (q0, q) bandwidth-compression cell is reachable with a
/// real chirp A1 = -A2 (q strictly between q0 and 1/q0 is not).
bool compression_accessible(double q0, double q);

/// The chirp realizing pulse-length ratio q from zero-chirp ratio q0
/// (sigma1 = 1, sigma2 = sqrt(q0), A1 = -A2). Throws invalid_parameter
/// for inaccessible cells.
double compression_chirp(double q0, double q);

/// Grid-computed spectral width of the upconverted signal over its
/// first-order prediction for one compression cell at coupling p.
double width_ratio_cell(double q0, double q, double p, int n_a = 4096,
                        int n_h = 128);

// Figure reproduction: each command evaluates its sweep and writes one CSV
// data file with full provenance comments. Panels:
//   fig2: a) efficiency vs p per q; b) efficiency vs p per T;
//         c) optimal efficiency over (q, T); d) fidelity over (q, T)
//   fig3: a) efficiency vs gamma per compression chirp;
//         b) width ratio over (q0, q)
//   fig4: output vs input Renyi 2-entropy per q, sweeping pump bandwidth
void fig2(char panel, const nlohmann::json& config, const std::string& out);
void fig3(char panel, const nlohmann::json& config, const std::string& out);
void fig4(const nlohmann::json& config, const std::string& out);

/// Sample one of the closed-form two-photon waveforms ("input",
/// "remaining" or "upconverted") on default axes and export the grid
/// snapshot as CSV. Photon/escort records come from JSON with the standard
/// field names.
void waveform_csv(const nlohmann::json& photon_json,
                  const nlohmann::json& escort_json, double gamma,
                  const std::string& mode, int n_a, int n_h,
                  const std::string& out);

}  // namespace sfg::figures

#endif  // SFG_FIGURES_HPP
