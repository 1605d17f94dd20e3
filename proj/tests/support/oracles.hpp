// Independent reference computations for the tests. Nothing here calls the
// solver code paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "swipt/model.hpp"

namespace oracle {

using swipt::Index;
using swipt::MatrixXd;
using swipt::ScenarioMulti;
using swipt::ScenarioSingle;
using swipt::VectorXd;

inline double ee_at(const ScenarioSingle& s, const VectorXd& p, double alpha) {
  const double received = s.gains.dot(p);
  return std::log(1.0 + alpha * received / s.params.noise_power) /
         (p.sum() + s.params.circuit_power);
}

/// Largest alpha on {0, 1/m, ..., 1} that still meets the harvesting
/// requirement at received power `received`; -1 when none does.
inline double largest_grid_alpha(const ScenarioSingle& s, double received, int m) {
  const double zeta = s.params.conversion_efficiency;
  auto admissible = [&](int j) {
    return zeta * (1.0 - static_cast<double>(j) / m) * received >= s.min_harvest;
  };
  if (!admissible(0)) return -1.0;
  // Closed-form guess, then walk to the exact grid boundary.
  const double bound = received > 0.0 ? 1.0 - s.min_harvest / (zeta * received) : 1.0;
  int j = std::clamp(static_cast<int>(std::floor(bound * m)), 0, m);
  while (j < m && admissible(j + 1)) ++j;
  while (j > 0 && !admissible(j)) --j;
  return static_cast<double>(j) / m;
}

/// Exhaustive search for the single-device problem: every port permutation,
/// every prefix length (ports before the free one at full power, ports after
/// it off), the free port on a uniform grid of `power_points` values and alpha
/// on a grid of `alpha_points` values. For fixed powers the rate grows with
/// alpha, so the largest admissible grid alpha is the grid optimum.
inline double brute_force_p1(const ScenarioSingle& s, int power_points = 10000,
                             int alpha_points = 1000) {
  const Index n = s.ports();
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = 0.0;
  do {
    for (Index m = 0; m < n; ++m) {
      VectorXd p = VectorXd::Zero(n);
      for (Index j = 0; j < m; ++j) {
        const Index port = perm[static_cast<std::size_t>(j)];
        p(port) = s.power_caps(port);
      }
      const Index free_port = perm[static_cast<std::size_t>(m)];
      const double cap = s.power_caps(free_port);
      for (int g = 0; g < power_points; ++g) {
        p(free_port) = cap * static_cast<double>(g) / (power_points - 1);
        const double alpha = largest_grid_alpha(s, s.gains.dot(p), alpha_points - 1);
        if (alpha <= 0.0) continue;
        best = std::max(best, ee_at(s, p, alpha));
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Grid search over one scalar power for the N = 1, E_bar = 0 case.
inline double grid_argmax_single_port(const ScenarioSingle& s, double step) {
  double best_p = 0.0;
  double best = -1.0;
  VectorXd p(1);
  for (double x = 0.0; x <= s.power_caps(0) + 1e-15; x += step) {
    p(0) = x;
    const double v = ee_at(s, p, 1.0);
    if (v > best) {
      best = v;
      best_p = x;
    }
  }
  return best_p;
}

/// Exhaustive grid for N = 2, K = 2: each p_{i,k} on {0, P_i/r, ..., P_i}
/// with per-port sums capped, alpha_k at its closed-form best
/// min(1, 1 - E_k / (zeta H_k)) for the given powers.
inline double brute_force_p2_2x2(const ScenarioMulti& s, int r = 50) {
  const double sigma2 = s.params.noise_power;
  const double zeta = s.params.conversion_efficiency;
  const double pc = s.params.circuit_power;
  const Index kk = s.devices();
  double best = 0.0;
  MatrixXd p(2, 2);
  for (int a = 0; a <= r; ++a) {
    p(0, 0) = s.power_caps(0) * a / r;
    for (int b = 0; a + b <= r; ++b) {
      p(0, 1) = s.power_caps(0) * b / r;
      for (int c = 0; c <= r; ++c) {
        p(1, 0) = s.power_caps(1) * c / r;
        for (int d = 0; c + d <= r; ++d) {
          p(1, 1) = s.power_caps(1) * d / r;
          const VectorXd totals = p.rowwise().sum();
          double rate = 0.0;
          bool ok = true;
          for (Index k = 0; k < kk && ok; ++k) {
            const double harvestable = zeta * s.gains.col(k).dot(totals);
            double alpha = 1.0;
            if (s.min_harvest(k) > 0.0) {
              if (harvestable <= 0.0) {
                ok = false;
                break;
              }
              alpha = std::min(1.0, 1.0 - s.min_harvest(k) / harvestable);
            }
            if (alpha < 0.0) {
              ok = false;
              break;
            }
            rate += std::log(1.0 + alpha * s.gains.col(k).dot(p.col(k)) / sigma2) /
                    static_cast<double>(kk);
          }
          if (ok) best = std::max(best, rate / (p.sum() + pc));
        }
      }
    }
  }
  return best;
}

/// Random feasible single-device instance at simulation parameters: caps drawn
/// from [0.5, 6] W, requirement a fraction rho in [0, 0.9] of the harvestable
/// maximum.
inline ScenarioSingle random_feasible_single(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919u + 17u);
  std::uniform_real_distribution<double> cap_dist(0.5, 6.0);
  std::uniform_real_distribution<double> rho_dist(0.0, 0.9);
  auto params = swipt::SystemParams::table_one();
  ScenarioSingle s = swipt::generate_scenario_single(n, seed, params, 1.0, 0.0);
  for (Index i = 0; i < n; ++i) s.power_caps(i) = cap_dist(rng);
  s.min_harvest = rho_dist(rng) * params.conversion_efficiency * s.gains.dot(s.power_caps);
  return s;
}

/// Random feasible multi-device instance: 2 W caps, a common requirement equal
/// to a fraction rho in [0.05, 0.5] of the weakest device's harvestable maximum.
inline ScenarioMulti random_feasible_multi(Index n, Index k, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 104729u + 3u);
  std::uniform_real_distribution<double> rho_dist(0.05, 0.5);
  const auto params = swipt::SystemParams::table_one();
  ScenarioMulti s = swipt::generate_scenario_multi(n, k, seed, params, 2.0, 0.0);
  const VectorXd reach = params.conversion_efficiency * (s.gains.transpose() * s.power_caps);
  s.min_harvest.setConstant(rho_dist(rng) * reach.minCoeff());
  return s;
}

}  // namespace oracle
