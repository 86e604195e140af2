#ifndef SFG_MODEL_HPP
#define SFG_MODEL_HPP

#include <array>

#include "sfg/types.hpp"

#include "json.hpp"

namespace sfg {

void validate(const PhotonSpec& photon);
void validate(const EscortSpec& escort);
void validate(const DimensionlessParams& params);

/// Reduce physical parameters to the dimensionless triple (p, T, q).
///   p = 2 (8 pi)^{1/4} (sigma2^2 / (1 + 16 A2^2 sigma2^4))^{1/4} |gamma|
///   T = sqrt(2) sigma2 tau / sqrt(1 + 16 A2^2 sigma2^4)
///   q = (sigma2^2/sigma1^2)
///       [1 + sigma1^2/S^2 + 16 A1^2 sigma1^4 (S^2+sigma_h^2)/(S^2+sigma1^2+sigma_h^2)]
///       / (1 + 16 A2^2 sigma2^4)
DimensionlessParams reduce(const PhotonSpec& photon, const EscortSpec& escort,
                           double gamma);

/// Pulse length ratio before any chirp is applied: sigma2^2 / sigma1^2.
double q_zero_chirp(const PhotonSpec& photon, const EscortSpec& escort);

/// Invert the p substitution: the gamma that realizes a given p with this
/// escort.
double gamma_for_p(double p, const EscortSpec& escort);

/// Canonical physical realization of a dimensionless point: unit filter
/// bandwidths, separable pump (S = 1e9), no chirps; sigma2 carries q and
/// tau carries T.
struct PhysicalPoint {
  PhotonSpec photon;
  EscortSpec escort;
  double gamma = 0.0;
};
PhysicalPoint canonical_point(double p, double q, double T);

/// Bandwidth-compression realization: sigma1 = sigma2 = 1, A1 = -A2 = chirp,
/// separable pump, tau = 0 (this pins q = 1 for every chirp).
PhysicalPoint compression_point(double p, double chirp);

/// Temporal intensity statistics of the signal/herald marginals of the
/// input pair: {signal stdev, herald stdev} in ps.
std::array<double, 2> temporal_widths(const PhotonSpec& photon);

/// Stretched temporal intensity stdev of the escort pulse.
double escort_temporal_width(const EscortSpec& escort);

void to_json(nlohmann::json& j, const PhotonSpec& photon);
void from_json(const nlohmann::json& j, PhotonSpec& photon);
void to_json(nlohmann::json& j, const EscortSpec& escort);
void from_json(const nlohmann::json& j, EscortSpec& escort);
void to_json(nlohmann::json& j, const DimensionlessParams& params);
void from_json(const nlohmann::json& j, DimensionlessParams& params);

}  // namespace sfg

#endif  // SFG_MODEL_HPP
