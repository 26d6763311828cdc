#include "fbn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace fbn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BenchCell run_cell(const std::string& name, const ProblemInstance& inst,
                   const std::string& solver_name, SolverConfig config, double epsilon_r) {
  BenchCell cell;
  cell.instance = name;
  cell.solver = solver_name;
  if (!inst.has_reference()) return cell;  // left invalid
  cell.valid = true;

  double fstar = *inst.f_star;
  config.target_objective = fstar + epsilon_r * std::max(1.0, std::fabs(fstar));
  config.tol = 1e-15;  // let the objective target decide

  auto t0 = std::chrono::steady_clock::now();
  SolveResult res = solver_by_name(solver_name)(inst.problem, config, zeros(inst.problem.dim()));
  cell.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  cell.status = res.status;
  cell.outer_iters = res.trace.rows.empty() ? 0 : res.trace.rows.back().k;
  cell.cg_iters = res.trace.total_cg_iters();
  cell.final_f = res.f_final;
  cell.final_g_norm = res.trace.rows.empty() ? 0.0 : res.trace.rows.back().g_norm;
  return cell;
}

}  // namespace

BenchmarkReport run_benchmark(const std::vector<std::pair<std::string, ProblemInstance>>& instances,
                              const std::vector<std::string>& solvers, const SolverConfig& base,
                              double epsilon_r, int threads) {
  if (instances.empty()) throw std::invalid_argument("run_benchmark: no instances");
  if (solvers.empty()) throw std::invalid_argument("run_benchmark: no solvers");
  for (const auto& s : solvers)
    if (!is_solver_name(s)) throw std::invalid_argument("run_benchmark: unknown solver " + s);

  BenchmarkReport report;
  report.epsilon_r = epsilon_r;
  report.parallel = threads > 1;
  for (const auto& [name, inst] : instances) {
    (void)inst;
    report.instances.push_back(name);
  }
  report.solvers = solvers;

  std::vector<std::function<BenchCell()>> jobs;
  for (const auto& [name, inst] : instances)
    for (const auto& solver : solvers)
      jobs.push_back([&name, &inst, solver, base, epsilon_r] {
        return run_cell(name, inst, solver, base, epsilon_r);
      });

  report.cells.resize(jobs.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) report.cells[i] = jobs[i]();
  } else {
    std::vector<std::future<BenchCell>> futures;
    futures.reserve(jobs.size());
    for (auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
    for (std::size_t i = 0; i < jobs.size(); ++i) report.cells[i] = futures[i].get();
  }
  compute_ratios(report);
  return report;
}

void compute_ratios(BenchmarkReport& report) {
  for (const auto& name : report.instances) {
    double best = kInf;
    for (const auto& cell : report.cells)
      if (cell.instance == name && cell.valid && cell.status == SolveStatus::converged)
        best = std::min(best, cell.wall_s);
    for (auto& cell : report.cells) {
      if (cell.instance != name) continue;
      if (!cell.valid || cell.status != SolveStatus::converged || !(best > 0.0) ||
          !std::isfinite(best)) {
        cell.ratio = kInf;
        continue;
      }
      cell.ratio = std::max(cell.wall_s / best, 1.0);
    }
  }
}

PerformanceProfile perf_profile(const BenchmarkReport& report) {
  PerformanceProfile profile;
  long valid_instances = 0;
  for (const auto& name : report.instances) {
    bool any = false;
    for (const auto& cell : report.cells)
      if (cell.instance == name && cell.valid) any = true;
    if (any) ++valid_instances;
  }
  if (valid_instances == 0) throw std::invalid_argument("perf_profile: no valid instances");

  for (const auto& cell : report.cells)
    if (cell.valid && std::isfinite(cell.ratio)) profile.grid.push_back(cell.ratio);
  profile.grid.push_back(1.0);
  std::sort(profile.grid.begin(), profile.grid.end());
  profile.grid.erase(std::unique(profile.grid.begin(), profile.grid.end()), profile.grid.end());

  for (const auto& solver : report.solvers) {
    std::vector<double>& f = profile.fractions[solver];
    f.resize(profile.grid.size(), 0.0);
    for (std::size_t gi = 0; gi < profile.grid.size(); ++gi) {
      long count = 0;
      for (const auto& cell : report.cells)
        if (cell.solver == solver && cell.valid && cell.ratio <= profile.grid[gi]) ++count;
      f[gi] = static_cast<double>(count) / static_cast<double>(valid_instances);
    }
  }
  return profile;
}

}  // namespace fbn
