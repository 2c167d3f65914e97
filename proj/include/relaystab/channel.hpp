#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaystab/errors.hpp"

namespace relaystab {

struct Meters {
  double value;
};
struct Watts {
  double value;
};
struct Hertz {
  double value;
};
struct DecibelPerHz {
  double value;
};

enum class Direction { uplink, downlink };

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct RadioConfig {
  Watts ul_power{0.25};
  Watts dl_power{40.0};
  DecibelPerHz ul_noise_density{-199.0};
  DecibelPerHz dl_noise_density{-195.0};
  Hertz rb_bandwidth{180e3};
  double pathloss_exponent = 3.76;
  // extra loss in dB applied on top of d^-beta
  double pathloss_offset_db = 0.0;
  std::vector<double> ul_thresholds_db{9.5, 2.5};
  std::vector<double> dl_thresholds_db{7.5, 1.5};

  const std::vector<double>& thresholds(Direction dir) const {
    return dir == Direction::uplink ? ul_thresholds_db : dl_thresholds_db;
  }
};

struct LinkGeometry {
  Meters distance;
  Direction direction;
};

struct LinkStateProbs {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t n) const { return probs[n]; }
  double sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

namespace detail {

// no ordering check: lets tests feed degenerate threshold lists
inline LinkStateProbs probs_from_snr(double mean_snr, std::span<const double> thresholds_linear) {
  const std::size_t m = thresholds_linear.size() + 1;
  LinkStateProbs out;
  out.probs.resize(m);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < m; ++n) {
    const double hi = n == 0 ? inf : thresholds_linear[n - 1];
    const double lo = n + 1 == m ? 0.0 : thresholds_linear[n];
    if (hi == inf) {
      out.probs[n] = std::exp(-lo / mean_snr);
    } else if (hi <= lo) {
      out.probs[n] = 0.0;
    } else {
      out.probs[n] = -std::exp(-lo / mean_snr) * std::expm1(-(hi - lo) / mean_snr);
    }
  }
  return out;
}

}  // namespace detail

inline double mean_snr(const LinkGeometry& geom, const RadioConfig& cfg) {
  const bool ul = geom.direction == Direction::uplink;
  const double power = ul ? cfg.ul_power.value : cfg.dl_power.value;
  const double density = ul ? cfg.ul_noise_density.value : cfg.dl_noise_density.value;
  const double n0 = db_to_linear(density) * cfg.rb_bandwidth.value;
  const double gain =
      std::pow(geom.distance.value, -cfg.pathloss_exponent) * db_to_linear(-cfg.pathloss_offset_db);
  return power * gain / n0;
}

inline LinkStateProbs state_probabilities(const LinkGeometry& geom, const RadioConfig& cfg,
                                          std::size_t num_states) {
  if (num_states < 2) throw std::invalid_argument("at least two SNR states required");
  if (!(geom.distance.value > 0.0)) throw std::invalid_argument("distance must be positive");
  if (!(cfg.ul_power.value > 0.0) || !(cfg.dl_power.value > 0.0) ||
      !(cfg.rb_bandwidth.value > 0.0))
    throw std::invalid_argument("powers and bandwidth must be positive");
  const auto& th = cfg.thresholds(geom.direction);
  if (th.size() < num_states - 1) throw std::invalid_argument("not enough SNR thresholds");
  std::vector<double> lin(num_states - 1);
  for (std::size_t n = 0; n + 1 < num_states; ++n) {
    if (n > 0 && !(th[n] < th[n - 1]))
      throw NonDecreasingThresholds("SNR thresholds must be strictly decreasing");
    lin[n] = db_to_linear(th[n]);
  }
  return detail::probs_from_snr(mean_snr(geom, cfg), lin);
}

struct SymmetricProbs {
  double p_s;
  double p_d;
};

inline SymmetricProbs symmetric_probs(Meters d, const RadioConfig& cfg) {
  const auto ul = state_probabilities({d, Direction::uplink}, cfg, 2);
  const auto dl = state_probabilities({d, Direction::downlink}, cfg, 2);
  return {ul[0], dl[0]};
}

}  // namespace relaystab
