#pragma once

#include <string>
#include <vector>

#include "uavbeam/geometry.hpp"
#include "uavbeam/rng.hpp"

namespace uavbeam {

// Sigmoid line-of-sight probability in elevation angle:
//   P_LoS(psi) = 1 / (1 + exp(a1*psi^3 + a2*psi^2 + a3*psi + a4)),  psi in radians.
// Coefficients depend on the propagation environment. The bundled defaults
// below are repo defaults chosen to give a monotone rise from near-blocked at
// grazing angles to near-clear at zenith, ordered by building density; they
// are not calibrated measurements. Override them in the config for
// calibrated studies.
struct EnvironmentParams {
  std::string label;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;

  static EnvironmentParams defaults(const std::string& label);
  static const std::vector<std::string>& known_labels();

  void validate() const;
};

struct RadioParams {
  double bandwidth_hz = 0.0;
  int num_subcarriers = 0;
  double noise_psd_w_hz = 0.0;   // linear W/Hz
  double carrier_hz = 0.0;
  double rician_k_linear = 0.0;  // dominant-to-scatter power ratio
  double rx_gain = 1.0;
  bool shadowing = true;

  double subcarrier_bw_hz() const { return bandwidth_hz / num_subcarriers; }
  double noise_per_subcarrier_w() const { return noise_psd_w_hz * subcarrier_bw_hz(); }

  void validate() const;
};

// Transmit antenna abstraction for one sector beam.
// from_beamwidth ties the gain to the beam: a beam of width theta needs
// N = ceil(2 / theta_rad) radiating elements and gets tx gain G = N.
// with_fixed_gain keeps the element count implied by the beamwidth but pins
// the gain to a scenario constant, which is how the sweep initializes a
// single hardware design and then varies the sector width it is driven with.
struct AntennaModel {
  double theta_deg = 0.0;
  int num_elements = 0;
  double tx_gain = 0.0;

  static AntennaModel from_beamwidth(double theta_deg);
  static AntennaModel with_fixed_gain(double theta_deg, double gain);
};

int elements_for_beamwidth(double theta_deg);  // ceil(2 / theta_rad)

enum class LosMode { Blend, Bernoulli };

// psi = arcsin(h / l); requires 0 < h <= l.
double elevation_angle(double uav_height_m, double link_m);

double los_probability(double elevation_rad, const EnvironmentParams& env);

// Log-distance path loss in dB at 28 GHz with optional lognormal shadowing;
// link length below 1 m is rejected (model validity floor).
double path_loss_los_db(double link_m, RngEngine& rng, bool shadowing);
double path_loss_nlos_db(double link_m, RngEngine& rng, bool shadowing);

inline constexpr double kPathLossLosInterceptDb = 61.4;
inline constexpr double kPathLossLosSlopeDb = 20.0;
inline constexpr double kShadowLosStdDb = 5.8;
inline constexpr double kPathLossNlosInterceptDb = 72.0;
inline constexpr double kPathLossNlosSlopeDb = 29.2;
inline constexpr double kShadowNlosStdDb = 8.7;
inline constexpr double kMinLinkM = 1.0;

enum class FadingKind { LosRician, NlosRayleigh };

// Unit-mean small-scale power gain |h|^2: Rician (dominant + scatter) for
// LoS, Rayleigh for NLoS.
double small_scale_power_gain(FadingKind kind, double rician_k_linear, RngEngine& rng);

// Deterministic core of the SNR coefficient for one subcarrier:
//   gamma = G * G_r * (h_los2*g_los*p_los + h_nlos2*g_nlos*(1 - p_los)) / noise_w
// with g_* linear path gains. Exposed separately so the algebra is testable
// without touching the RNG.
double blended_snr_coefficient(double h_los2, double h_nlos2, double gain_los,
                               double gain_nlos, double p_los, double tx_gain,
                               double rx_gain, double noise_w);

// Per-subcarrier SNR coefficients gamma[n] (1/W) for one user-UAV link.
// Large-scale terms (shadowing, and the LoS state in Bernoulli mode) are
// drawn once per call; fading is redrawn independently per subcarrier.
std::vector<double> snr_coefficient(const UserPosition& user, const EnvironmentParams& env,
                                    const RadioParams& radio, const AntennaModel& antenna,
                                    LosMode mode, RngEngine& rng);

}  // namespace uavbeam
