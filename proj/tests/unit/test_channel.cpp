#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/channel_oracle.hpp"
#include "relaystab/channel.hpp"

using namespace relaystab;

namespace {

std::vector<double> oracle_probs(const RadioConfig& c, Direction dir, double d, std::size_t m) {
  const bool ul = dir == Direction::uplink;
  std::vector<double> th(c.thresholds(dir).begin(), c.thresholds(dir).begin() + static_cast<std::ptrdiff_t>(m - 1));
  return oracle::rayleigh_state_probs(ul ? c.ul_power.value : c.dl_power.value,
                                      ul ? c.ul_noise_density.value : c.dl_noise_density.value,
                                      c.rb_bandwidth.value, d, c.pathloss_exponent, c.pathloss_offset_db, th);
}

}  // namespace

TEST(Channel, HalfSplitAtLogTwo) {
  // threshold chosen so gamma / mean_snr = ln 2
  const double snr = 37.5;
  const double th[] = {snr * std::log(2.0)};
  const auto p = detail::probs_from_snr(snr, th);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(Channel, ShortDistanceSaturatesBestState) {
  RadioConfig c;
  const auto p = state_probabilities({Meters{1e-3}, Direction::uplink}, c, 3);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  EXPECT_NEAR(p[1], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 0.0, 1e-12);
}

TEST(Channel, DefaultConfigMatchesHighPrecision) {
  RadioConfig c;
  for (double d : {100.0, 350.0, 500.0, 1200.0})
    for (auto dir : {Direction::uplink, Direction::downlink}) {
      const auto p = state_probabilities({Meters{d}, dir}, c, 3);
      const auto o = oracle_probs(c, dir, d, 3);
      for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(p[n], o[n], 1e-13 + 1e-11 * o[n]) << d << " state " << n;
    }
}

TEST(Channel, OffsetAndExponentMatchHighPrecision) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> off(0, 45), beta(2.0, 4.5), dist(10, 2000);
  for (int t = 0; t < 200; ++t) {
    RadioConfig c;
    c.pathloss_offset_db = off(g);
    c.pathloss_exponent = beta(g);
    const double d = dist(g);
    const auto dir = t % 2 ? Direction::uplink : Direction::downlink;
    const auto p = state_probabilities({Meters{d}, dir}, c, 3);
    const auto o = oracle_probs(c, dir, d, 3);
    for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(p[n], o[n], 1e-13);
  }
}

TEST(Channel, SymmetricPairAtDefaultDistance) {
  RadioConfig c;
  const auto sp = symmetric_probs(Meters{350}, c);
  EXPECT_NEAR(sp.p_s, oracle_probs(c, Direction::uplink, 350, 2)[0], 1e-14);
  EXPECT_NEAR(sp.p_d, oracle_probs(c, Direction::downlink, 350, 2)[0], 1e-14);
}

TEST(Channel, IdenticalDirectionsGiveEqualPair) {
  RadioConfig c;
  c.dl_power = c.ul_power;
  c.dl_noise_density = c.ul_noise_density;
  c.dl_thresholds_db = c.ul_thresholds_db;
  const auto sp = symmetric_probs(Meters{420}, c);
  EXPECT_EQ(sp.p_s, sp.p_d);
}

TEST(Channel, NormalizationProperty) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> off(0, 60), dist(1, 5000);
  for (int t = 0; t < 1000; ++t) {
    RadioConfig c;
    c.pathloss_offset_db = off(g);
    c.ul_thresholds_db = {15.0, 9.5, 2.5, -3.0};
    for (std::size_t m = 2; m <= 5; ++m) {
      const auto p = state_probabilities({Meters{dist(g)}, Direction::uplink}, c, m);
      EXPECT_NEAR(p.sum(), 1.0, 1e-12);
      for (double x : p.probs) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
    }
  }
}

TEST(Channel, MonotoneInDistanceAndPower) {
  RadioConfig c;
  double prev = 1.0;
  for (double d = 50; d < 3000; d *= 1.1) {
    const double p = state_probabilities({Meters{d}, Direction::uplink}, c, 3)[0];
    EXPECT_LE(p, prev + 1e-15);
    prev = p;
  }
  prev = 0.0;
  for (double w = 0.01; w < 10; w *= 1.3) {
    c.ul_power = Watts{w};
    const double p = state_probabilities({Meters{800}, Direction::uplink}, c, 3)[0];
    EXPECT_GE(p, prev - 1e-15);
    prev = p;
  }
  const auto a = symmetric_probs(Meters{200}, RadioConfig{});
  const auto b = symmetric_probs(Meters{600}, RadioConfig{});
  EXPECT_GE(a.p_s, b.p_s);
}

TEST(Channel, EqualThresholdsGiveEmptyState) {
  const double th[] = {4.0, 4.0, 1.0};
  const auto p = detail::probs_from_snr(3.0, th);
  EXPECT_EQ(p[1], 0.0);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
}

TEST(Channel, RejectsBadConfigs) {
  RadioConfig c;
  c.ul_thresholds_db = {2.5, 9.5};
  EXPECT_THROW(state_probabilities({Meters{100}, Direction::uplink}, c, 3), NonDecreasingThresholds);
  c = RadioConfig{};
  c.ul_thresholds_db = {3.0, 3.0};
  EXPECT_THROW(state_probabilities({Meters{100}, Direction::uplink}, c, 3), NonDecreasingThresholds);
  c = RadioConfig{};
  EXPECT_THROW(state_probabilities({Meters{0}, Direction::uplink}, c, 3), std::invalid_argument);
  EXPECT_THROW(state_probabilities({Meters{100}, Direction::uplink}, c, 1), std::invalid_argument);
  EXPECT_THROW(state_probabilities({Meters{100}, Direction::uplink}, c, 4), std::invalid_argument);
  c.ul_power = Watts{0};
  EXPECT_THROW(state_probabilities({Meters{100}, Direction::uplink}, c, 3), std::invalid_argument);
}
