#include "swipt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "swipt/config_io.hpp"
#include "swipt/multi_benchmarks.hpp"
#include "swipt/single_optimal.hpp"

namespace swipt {

namespace {

template <typename E>
struct Named {
  E value;
  const char* name;
};

constexpr Named<ProblemKind> kProblemNames[] = {{ProblemKind::kSingle, "single"},
                                                {ProblemKind::kMulti, "multi"}};
constexpr Named<SweepKind> kSweepNames[] = {{SweepKind::kMinHarvest, "min_harvest"},
                                            {SweepKind::kPowerCap, "power_cap"},
                                            {SweepKind::kNumPorts, "n_ports"},
                                            {SweepKind::kNumDevices, "n_devices"}};
constexpr Named<InfeasiblePolicy> kPolicyNames[] = {
    {InfeasiblePolicy::kCountAsZero, "zero"}, {InfeasiblePolicy::kExclude, "exclude"}};

template <typename E, std::size_t N>
std::string name_of(const Named<E> (&table)[N], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename E, std::size_t N>
E value_of(const Named<E> (&table)[N], const std::string& text, const char* what) {
  for (const auto& entry : table) {
    if (text == entry.name) return entry.value;
  }
  throw InvalidInput(std::string("unknown ") + what + " '" + text + "'");
}

bool is_integral(double v) { return std::floor(v) == v; }

struct Outcome {
  double ee = 0.0;
  bool feasible = false;
  bool failure = false;
};

// Fixed parameters with the swept one substituted.
struct PointSetup {
  Index n_ports;
  Index n_devices;
  double power_cap;
  double min_harvest;
};

PointSetup point_setup(const ExperimentConfig& c, double value) {
  PointSetup s{c.n_ports, c.n_devices, c.power_cap, c.min_harvest};
  switch (c.sweep_kind) {
    case SweepKind::kMinHarvest: s.min_harvest = value; break;
    case SweepKind::kPowerCap: s.power_cap = value; break;
    case SweepKind::kNumPorts: s.n_ports = static_cast<Index>(value); break;
    case SweepKind::kNumDevices: s.n_devices = static_cast<Index>(value); break;
  }
  return s;
}

Outcome solve_single_scheme(const std::string& scheme, const ScenarioSingle& s,
                            const ExperimentConfig& c) {
  SingleSolution sol;
  if (scheme == "optimal") {
    sol = solve_p1(s);
  } else if (scheme == "dinkelbach") {
    sol = solve_dinkelbach_single(s, c.alpha_grid_step);
  } else if (scheme == "fixed-alpha") {
    sol = solve_fixed_alpha(s, c.fixed_alpha);
  } else {
    sol = solve_se_max(s);
  }
  return {sol.feasible ? sol.ee : 0.0, sol.feasible, false};
}

Outcome solve_multi_scheme(const std::string& scheme, const ScenarioMulti& s,
                           const ExperimentConfig& c) {
  MultiScheme ms;
  AssociationMap map;
  if (scheme == "fixed-alpha") {
    ms.fixed_alpha = c.fixed_alpha;
  } else if (scheme == "nearest") {
    map = make_association(s);
    ms.association = &map;
  }
  const MultiRun run = run_multi(s, ms);
  const MultiSolution& sol = run.solution;
  return {sol.feasible ? sol.ee : 0.0, sol.feasible, run.ellipsoid_failures > 0};
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string to_string(ProblemKind kind) { return name_of(kProblemNames, kind); }
std::string to_string(SweepKind kind) { return name_of(kSweepNames, kind); }
std::string to_string(InfeasiblePolicy policy) { return name_of(kPolicyNames, policy); }

ProblemKind parse_problem_kind(const std::string& text) {
  return value_of(kProblemNames, text, "problem kind");
}
SweepKind parse_sweep_kind(const std::string& text) {
  return value_of(kSweepNames, text, "sweep kind");
}
InfeasiblePolicy parse_infeasible_policy(const std::string& text) {
  return value_of(kPolicyNames, text, "infeasible policy");
}

const std::vector<std::string>& single_schemes() {
  static const std::vector<std::string> names{"optimal", "dinkelbach", "fixed-alpha", "se-max"};
  return names;
}

const std::vector<std::string>& multi_schemes() {
  static const std::vector<std::string> names{"proposed", "fixed-alpha", "nearest"};
  return names;
}

void ExperimentConfig::validate() const {
  params.validate();
  if (sweep_values.empty()) throw InvalidInput("sweep_values must not be empty");
  if (!std::is_sorted(sweep_values.begin(), sweep_values.end())) {
    throw InvalidInput("sweep_values must be sorted");
  }
  for (double v : sweep_values) {
    if (!std::isfinite(v)) throw InvalidInput("sweep values must be finite");
  }
  if (n_realizations < 1) throw InvalidInput("n_realizations must be at least 1");
  if (schemes.empty()) throw InvalidInput("at least one scheme is required");
  const auto& known = problem == ProblemKind::kSingle ? single_schemes() : multi_schemes();
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw InvalidInput("scheme '" + s + "' is not available for the " + to_string(problem) +
                         "-device problem");
    }
    if (std::count(schemes.begin(), schemes.end(), s) > 1) {
      throw InvalidInput("scheme '" + s + "' listed twice");
    }
  }
  if (problem == ProblemKind::kSingle) {
    if (sweep_kind == SweepKind::kNumDevices) {
      throw InvalidInput("the single-device problem cannot sweep n_devices");
    }
    if (n_devices != 1) throw InvalidInput("the single-device problem needs n_devices = 1");
  }
  for (const double v : sweep_values) {
    const PointSetup p = point_setup(*this, v);
    if ((sweep_kind == SweepKind::kNumPorts || sweep_kind == SweepKind::kNumDevices) &&
        !is_integral(v)) {
      throw InvalidInput("port and device counts must be integers");
    }
    if (p.n_ports < 1 || p.n_devices < 1) throw InvalidInput("counts must be at least 1");
    if (!(p.power_cap > 0.0) || !std::isfinite(p.power_cap)) {
      throw InvalidInput("power_cap must be positive");
    }
    if (!(p.min_harvest >= 0.0) || !std::isfinite(p.min_harvest)) {
      throw InvalidInput("min_harvest must be non-negative");
    }
  }
  if (std::find(schemes.begin(), schemes.end(), "fixed-alpha") != schemes.end()) {
    const bool ok = problem == ProblemKind::kSingle ? fixed_alpha > 0.0 && fixed_alpha <= 1.0
                                                    : fixed_alpha > 0.0 && fixed_alpha < 1.0;
    if (!ok) throw InvalidInput("fixed_alpha out of range");
  }
  if (!(alpha_grid_step > 0.0 && alpha_grid_step <= 0.1)) {
    throw InvalidInput("alpha_grid_step must lie in (0, 0.1]");
  }
}

const PointSummary& ExperimentResult::at(const std::string& scheme,
                                         std::size_t sweep_index) const {
  const auto& schemes = config.schemes;
  const auto it = std::find(schemes.begin(), schemes.end(), scheme);
  if (it == schemes.end() || sweep_index >= config.sweep_values.size()) {
    throw InvalidInput("no result for scheme '" + scheme + "'");
  }
  const auto s = static_cast<std::size_t>(it - schemes.begin());
  return points[s * config.sweep_values.size() + sweep_index];
}

std::vector<double> ExperimentResult::means(const std::string& scheme) const {
  std::vector<double> out;
  for (std::size_t j = 0; j < config.sweep_values.size(); ++j) out.push_back(at(scheme, j).ee_mean);
  return out;
}

std::uint64_t realization_seed(std::uint64_t base_seed, int realization) {
  return base_seed ^ static_cast<std::uint64_t>(realization);
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::size_t n_schemes = config.schemes.size();
  const std::size_t n_points = config.sweep_values.size();
  const auto n_real = static_cast<std::size_t>(config.n_realizations);

  ExperimentResult res;
  res.config = config;
  res.ee.assign(n_schemes, std::vector<std::vector<double>>(n_points, std::vector<double>(n_real)));
  res.feasible.assign(n_schemes,
                      std::vector<std::vector<char>>(n_points, std::vector<char>(n_real)));
  std::vector<std::vector<std::vector<char>>> failed = res.feasible;

  auto work = [&](std::size_t r) {
    const std::uint64_t seed = realization_seed(config.base_seed, static_cast<int>(r));
    for (std::size_t j = 0; j < n_points; ++j) {
      const PointSetup p = point_setup(config, config.sweep_values[j]);
      std::optional<ScenarioSingle> single;
      std::optional<ScenarioMulti> multi;
      if (config.problem == ProblemKind::kSingle) {
        single = generate_scenario_single(p.n_ports, seed, config.params, p.power_cap,
                                          p.min_harvest);
      } else {
        multi = generate_scenario_multi(p.n_ports, p.n_devices, seed, config.params,
                                        p.power_cap, p.min_harvest);
      }
      for (std::size_t s = 0; s < n_schemes; ++s) {
        const std::string& scheme = config.schemes[s];
        Outcome out;
        try {
          out = single ? solve_single_scheme(scheme, *single, config)
                       : solve_multi_scheme(scheme, *multi, config);
        } catch (const NumericalFailure&) {
          out = {0.0, false, true};
        }
        res.ee[s][j][r] = out.ee;
        res.feasible[s][j][r] = out.feasible ? 1 : 0;
        failed[s][j][r] = out.failure ? 1 : 0;
      }
    }
  };

  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_real));
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_real; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < n_real; r = next++) {
          try {
            work(r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next = n_real;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  // Ordered reduction over realization index.
  const bool exclude = config.infeasible_policy == InfeasiblePolicy::kExclude;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    for (std::size_t j = 0; j < n_points; ++j) {
      PointSummary ps;
      ps.scheme = config.schemes[s];
      ps.sweep_value = config.sweep_values[j];
      ps.n_total = config.n_realizations;
      double sum = 0.0;
      int count = 0;
      for (std::size_t r = 0; r < n_real; ++r) {
        const bool ok = res.feasible[s][j][r] != 0;
        ps.n_feasible += ok ? 1 : 0;
        ps.n_failures += failed[s][j][r];
        if (exclude && !ok) continue;
        sum += res.ee[s][j][r];
        ++count;
      }
      if (count > 0) {
        ps.ee_mean = sum / count;
        double sq = 0.0;
        for (std::size_t r = 0; r < n_real; ++r) {
          if (exclude && !res.feasible[s][j][r]) continue;
          const double d = res.ee[s][j][r] - ps.ee_mean;
          sq += d * d;
        }
        ps.ee_std = count > 1 ? std::sqrt(sq / (count - 1)) : 0.0;
        ps.ci95 = 1.96 * ps.ee_std / std::sqrt(static_cast<double>(count));
      }
      res.points.push_back(ps);
    }
  }
  return res;
}

std::string results_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "scheme,sweep_param,sweep_value,ee_mean_nats,ee_mean_bits,ee_std,ci95,n_feasible,"
        "n_total\n";
  const std::string param = to_string(result.config.sweep_kind);
  for (const auto& p : result.points) {
    os << p.scheme << ',' << param << ',' << format_g9(p.sweep_value) << ','
       << format_g9(p.ee_mean) << ',' << format_g9(p.ee_mean * kLog2E) << ','
       << format_g9(p.ee_std) << ',' << format_g9(p.ci95) << ',' << p.n_feasible << ','
       << p.n_total << '\n';
  }
  return os.str();
}

void emit_results(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
  };
  write(out_dir / "results.csv", results_csv(result));

  Json sidecar = config_to_json(result.config);
  Json failures = Json::object();
  for (const auto& p : result.points) {
    if (p.n_failures > 0) failures[p.scheme + "@" + format_g9(p.sweep_value)] = p.n_failures;
  }
  sidecar["run"] = {
      {"seed_rule", "base_seed xor realization"},
      {"numerical_failures", failures},
  };
  write(out_dir / "results.json", sidecar.dump(2) + "\n");
}

}  // namespace swipt
