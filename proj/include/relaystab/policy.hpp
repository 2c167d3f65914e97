#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "relaystab/channel.hpp"
#include "relaystab/errors.hpp"

namespace relaystab {

// 3-UE policies
//  g1: UE2UE first          g2: UE2BS first
//  g3: UE2UE first only when it runs at r1
//  g4: UE2BS first only when it runs at r1
//  g5: higher rate wins, tie -> UE2UE
//  g6: higher rate wins, tie -> UE2BS
enum class SsPolicy : int { g1 = 1, g2, g3, g4, g5, g6 };

inline constexpr std::array<SsPolicy, 6> all_ss_policies{SsPolicy::g1, SsPolicy::g2, SsPolicy::g3,
                                                         SsPolicy::g4, SsPolicy::g5, SsPolicy::g6};

inline std::string to_string(SsPolicy p) { return "G" + std::to_string(static_cast<int>(p)); }

inline SsPolicy ss_policy_from_id(int id) {
  if (id < 1 || id > 6) throw std::invalid_argument("policy id must be in 1..6");
  return static_cast<SsPolicy>(id);
}

// U,V: UE2UE scheduled given its rate class r1 / r2
// W,X: UE2BS scheduled given it is at r1 / r2, Q_BS empty
// Y,Z: same with Q_BS nonempty
struct SsPolicyParams {
  double U, V, W, X, Y, Z;
  double N;
};

inline SsPolicyParams ss_params(SsPolicy policy, const LinkStateProbs& s, const LinkStateProbs& u,
                                const LinkStateProbs& d) {
  if (s.size() != 3 || u.size() != 3 || d.size() != 3)
    throw std::invalid_argument("3-UE policy parameters need three SNR states per link");
  const double s3 = s[2], d3 = d[2], u3 = u[2];
  const double ns1 = 1.0 - s[0], nd1 = 1.0 - d[0], nu1 = 1.0 - u[0];
  SsPolicyParams p{};
  switch (policy) {
    case SsPolicy::g1: p = {1.0, 1.0, s3, s3, s3 * d3, s3 * d3, 0.0}; break;
    case SsPolicy::g2: p = {u3, u3, 1.0, 1.0, 1.0, 1.0, 0.0}; break;
    case SsPolicy::g3: p = {1.0, u3, ns1, ns1, ns1 * nd1, ns1 * nd1, 0.0}; break;
    case SsPolicy::g4: p = {nu1, nu1, 1.0, s3, 1.0, s3 * d3, 0.0}; break;
    case SsPolicy::g5: p = {1.0, nu1, ns1, s3, ns1 * nd1, s3 * d3, 0.0}; break;
    case SsPolicy::g6: p = {nu1, u3, 1.0, ns1, 1.0, ns1 * nd1, 0.0}; break;
  }
  p.N = s[0] * p.U + ns1 * p.V;
  return p;
}

// multi-UE ordering; UE2UE flows are 0..K-1, UE2BS flows K..K+U-1
struct MuPolicy {
  std::vector<std::size_t> order;

  void validate(std::size_t K, std::size_t U) const {
    std::vector<bool> seen(K + U, false);
    for (auto i : order) {
      if (i >= K + U) throw UnknownIndex("communication index out of range");
      if (seen[i]) throw std::invalid_argument("duplicate communication in policy");
      seen[i] = true;
    }
  }

  std::optional<std::size_t> level_of(std::size_t index) const {
    auto it = std::find(order.begin(), order.end(), index);
    if (it == order.end()) return std::nullopt;
    return static_cast<std::size_t>(it - order.begin());
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i) s += '>';
      s += std::to_string(order[i]);
    }
    return s;
  }
};

struct PrioritizedSets {
  std::vector<std::size_t> ue2bs_before;
  std::vector<std::size_t> ue2ue_before;
};

inline PrioritizedSets prioritized_sets(const MuPolicy& policy, std::size_t index, std::size_t K,
                                        std::size_t U) {
  if (index >= K + U) throw UnknownIndex("communication index out of range");
  auto level = policy.level_of(index);
  if (!level) throw UnknownIndex("communication not present in policy");
  PrioritizedSets out;
  for (std::size_t i = 0; i < *level; ++i) {
    const auto c = policy.order[i];
    (c < K ? out.ue2ue_before : out.ue2bs_before).push_back(c);
  }
  return out;
}

// n! / (n-depth)! as a double; exact while below 2^53
inline double policy_count(std::size_t n, std::size_t depth) {
  double c = 1.0;
  for (std::size_t i = 0; i < depth; ++i) c *= static_cast<double>(n - i);
  return c;
}

// lexicographic stream of full orderings or length-depth prefixes
class PolicyStream {
 public:
  PolicyStream(std::size_t K, std::size_t U, std::optional<std::size_t> depth = std::nullopt)
      : n_(K + U), depth_(depth.value_or(K + U)) {
    if (depth_ > n_) throw DepthTooLarge("prefix depth exceeds number of communications");
    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  }

  std::optional<MuPolicy> next() {
    if (done_) return std::nullopt;
    MuPolicy p{{perm_.begin(), perm_.begin() + static_cast<std::ptrdiff_t>(depth_)}};
    std::reverse(perm_.begin() + static_cast<std::ptrdiff_t>(depth_), perm_.end());
    done_ = !std::next_permutation(perm_.begin(), perm_.end());
    return p;
  }

  std::size_t depth() const { return depth_; }
  double size() const { return policy_count(n_, depth_); }

  template <class F>
  void for_each(F&& f) {
    while (auto p = next()) f(*p);
  }

 private:
  std::size_t n_;
  std::size_t depth_;
  std::vector<std::size_t> perm_;
  bool done_ = false;
};

inline PolicyStream enumerate_policies(std::size_t K, std::size_t U,
                                       std::optional<std::size_t> depth = std::nullopt) {
  return PolicyStream(K, U, depth);
}

}  // namespace relaystab
