#pragma once

#include <map>
#include <string>

#include "fbn/problems.hpp"

namespace fbn {

struct BenchCell {
  std::string instance;
  std::string solver;
  bool valid = false;  // reference available, run counted
  SolveStatus status = SolveStatus::max_iter;
  double wall_s = 0.0;
  long outer_iters = 0;
  long cg_iters = 0;
  double final_f = 0.0;
  double final_g_norm = 0.0;
  double ratio = 0.0;  // performance ratio; inf when the run failed
};

struct BenchmarkReport {
  std::vector<std::string> instances;
  std::vector<std::string> solvers;
  std::vector<BenchCell> cells;
  double epsilon_r = 1e-8;
  bool parallel = false;  // wall times not comparable across cells
};

/// Runs every (instance, solver) pair until the objective reaches a
/// relative distance epsilon_r from the stored reference value
/// (target F* + eps (1 + |F*|)). Instances without a reference are
/// marked invalid. threads > 1 runs cells concurrently and flags the
/// report. Ratios are wall-time against the per-instance best.
BenchmarkReport run_benchmark(const std::vector<std::pair<std::string, ProblemInstance>>& instances,
                              const std::vector<std::string>& solvers, const SolverConfig& base,
                              double epsilon_r, int threads);

/// Fills the ratio field: per instance the fastest converged solver has
/// ratio 1, failures get +inf.
void compute_ratios(BenchmarkReport& report);

struct PerformanceProfile {
  std::vector<double> grid;                              // sorted distinct ratios
  std::map<std::string, std::vector<double>> fractions;  // solver -> f(r) over the grid
};

/// Dolan-More style profile: f_solver(r) is the fraction of valid
/// instances on which the solver's ratio is <= r. Nondecreasing in r;
/// reaches 1 only for solvers that succeeded everywhere.
PerformanceProfile perf_profile(const BenchmarkReport& report);

}  // namespace fbn
