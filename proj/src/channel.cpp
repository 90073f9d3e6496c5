#include "uavbeam/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "uavbeam/units.hpp"

namespace uavbeam {

namespace {

const std::vector<std::string> kLabels = {"sub-urban", "urban", "dense-urban",
                                          "high-rise-urban"};

}  // namespace

EnvironmentParams EnvironmentParams::defaults(const std::string& label) {
  EnvironmentParams env;
  env.label = label;
  // Repo defaults: linear sigmoids ordered by blockage (denser environments
  // need steeper elevation before the link clears). Sub-urban is close to
  // clear-sky above 45 degrees, which is what keeps rates fair at the
  // fairness levels the bundled scenarios are tuned for.
  if (label == "sub-urban") {
    env.a3 = -12.0;
    env.a4 = 4.0;
  } else if (label == "urban") {
    env.a3 = -10.0;
    env.a4 = 5.5;
  } else if (label == "dense-urban") {
    env.a3 = -9.0;
    env.a4 = 6.5;
  } else if (label == "high-rise-urban") {
    env.a3 = -8.0;
    env.a4 = 8.0;
  } else {
    std::string msg = "unknown environment label '" + label + "'; known labels:";
    for (const auto& l : kLabels) msg += " " + l;
    throw std::invalid_argument(msg);
  }
  return env;
}

const std::vector<std::string>& EnvironmentParams::known_labels() { return kLabels; }

void EnvironmentParams::validate() const {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(a3) || !std::isfinite(a4))
    throw std::invalid_argument("environment.alpha coefficients must be finite");
}

void RadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("radio.bandwidth_hz must be > 0");
  if (num_subcarriers < 1) throw std::invalid_argument("radio.num_subcarriers must be >= 1");
  if (!(noise_psd_w_hz > 0.0)) throw std::invalid_argument("radio.noise_psd must be > 0");
  if (!(carrier_hz > 0.0)) throw std::invalid_argument("radio.carrier_hz must be > 0");
  if (!(rician_k_linear > 0.0)) throw std::invalid_argument("radio.rician_k must be > 0");
  if (!(rx_gain > 0.0)) throw std::invalid_argument("radio.rx_gain must be > 0");
}

int elements_for_beamwidth(double theta_deg) {
  if (!(theta_deg > 0.0) || theta_deg > 360.0)
    throw std::invalid_argument("theta_deg must lie in (0, 360]");
  return static_cast<int>(std::ceil(2.0 / deg_to_rad(theta_deg)));
}

AntennaModel AntennaModel::from_beamwidth(double theta_deg) {
  AntennaModel a;
  a.theta_deg = theta_deg;
  a.num_elements = elements_for_beamwidth(theta_deg);
  a.tx_gain = static_cast<double>(a.num_elements);
  return a;
}

AntennaModel AntennaModel::with_fixed_gain(double theta_deg, double gain) {
  if (!(gain > 0.0)) throw std::invalid_argument("antenna gain must be > 0");
  AntennaModel a;
  a.theta_deg = theta_deg;
  a.num_elements = elements_for_beamwidth(theta_deg);
  a.tx_gain = gain;
  return a;
}

double elevation_angle(double uav_height_m, double link_m) {
  if (!(uav_height_m > 0.0)) throw std::invalid_argument("uav_height_m must be > 0");
  if (!(link_m >= uav_height_m))
    throw std::invalid_argument("link_m must be >= uav_height_m");
  return std::asin(uav_height_m / link_m);
}

double los_probability(double elevation_rad, const EnvironmentParams& env) {
  if (!(elevation_rad > 0.0) || elevation_rad > kPi / 2.0 + 1e-12)
    throw std::invalid_argument("elevation_rad must lie in (0, pi/2]");
  const double psi = elevation_rad;
  const double poly = env.a1 * psi * psi * psi + env.a2 * psi * psi + env.a3 * psi + env.a4;
  return 1.0 / (1.0 + std::exp(poly));
}

namespace {

double path_loss_db(double link_m, double intercept_db, double slope_db, double shadow_std_db,
                    RngEngine& rng, bool shadowing) {
  if (!(link_m >= kMinLinkM))
    throw std::invalid_argument("link_m must be >= 1 m");
  double pl = intercept_db + slope_db * std::log10(link_m);
  if (shadowing) {
    std::normal_distribution<double> shadow(0.0, shadow_std_db);
    pl += shadow(rng);
  }
  return pl;
}

}  // namespace

double path_loss_los_db(double link_m, RngEngine& rng, bool shadowing) {
  return path_loss_db(link_m, kPathLossLosInterceptDb, kPathLossLosSlopeDb, kShadowLosStdDb,
                      rng, shadowing);
}

double path_loss_nlos_db(double link_m, RngEngine& rng, bool shadowing) {
  return path_loss_db(link_m, kPathLossNlosInterceptDb, kPathLossNlosSlopeDb,
                      kShadowNlosStdDb, rng, shadowing);
}

double small_scale_power_gain(FadingKind kind, double rician_k_linear, RngEngine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (kind == FadingKind::LosRician) {
    if (!(rician_k_linear > 0.0)) throw std::invalid_argument("rician K must be > 0");
    // Dominant component of power K/(K+1) plus circular scatter of power
    // 1/(K+1); E[|h|^2] = 1.
    const double k = rician_k_linear;
    const double dom = std::sqrt(k / (k + 1.0));
    const double sigma = std::sqrt(1.0 / (2.0 * (k + 1.0)));
    const double re = dom + sigma * gauss(rng);
    const double im = sigma * gauss(rng);
    return re * re + im * im;
  }
  // Rayleigh: |h|^2 exponential with unit mean.
  const double re = gauss(rng);
  const double im = gauss(rng);
  return 0.5 * (re * re + im * im);
}

double blended_snr_coefficient(double h_los2, double h_nlos2, double gain_los,
                               double gain_nlos, double p_los, double tx_gain,
                               double rx_gain, double noise_w) {
  return tx_gain * rx_gain *
         (h_los2 * gain_los * p_los + h_nlos2 * gain_nlos * (1.0 - p_los)) / noise_w;
}

std::vector<double> snr_coefficient(const UserPosition& user, const EnvironmentParams& env,
                                    const RadioParams& radio, const AntennaModel& antenna,
                                    LosMode mode, RngEngine& rng) {
  radio.validate();
  env.validate();
  const double p_los = los_probability(user.elevation_rad, env);

  // Large-scale terms: one draw per link.
  const double pl_los = path_loss_los_db(user.link_m, rng, radio.shadowing);
  const double pl_nlos = path_loss_nlos_db(user.link_m, rng, radio.shadowing);
  const double g_los = db_to_linear(-pl_los);
  const double g_nlos = db_to_linear(-pl_nlos);
  bool los_state = true;
  if (mode == LosMode::Bernoulli) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    los_state = unit(rng) < p_los;
  }

  const double noise_w = radio.noise_per_subcarrier_w();
  std::vector<double> gamma(radio.num_subcarriers);
  for (int n = 0; n < radio.num_subcarriers; ++n) {
    const double h_los2 =
        small_scale_power_gain(FadingKind::LosRician, radio.rician_k_linear, rng);
    const double h_nlos2 =
        small_scale_power_gain(FadingKind::NlosRayleigh, radio.rician_k_linear, rng);
    if (mode == LosMode::Blend) {
      gamma[n] = blended_snr_coefficient(h_los2, h_nlos2, g_los, g_nlos, p_los,
                                         antenna.tx_gain, radio.rx_gain, noise_w);
    } else {
      const double h2 = los_state ? h_los2 : h_nlos2;
      const double g = los_state ? g_los : g_nlos;
      gamma[n] = antenna.tx_gain * radio.rx_gain * h2 * g / noise_w;
    }
  }
  return gamma;
}

}  // namespace uavbeam
