#pragma once

#include <optional>
#include <string>

#include "fbn/bench.hpp"

namespace fbn {
namespace cli {

/// Exit codes: 0 converged / success, 2 solver hit its iteration or
/// step-size limit, 1 configuration, input or I/O error.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotConverged = 2;

/// One CLI invocation, assembled from a JSON config file plus
/// command-line overrides. Unknown JSON keys are rejected up front.
struct RunConfig {
  std::string command;          // generate | solve | bench | profile
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string solver = "fbn_cg2";
  std::vector<std::string> solvers;
  SolverConfig solver_config;
  bool continuation = false;
  bool timing = true;       // write wall-clock column; off for byte-reproducible traces
  bool reference = false;   // generate/bench: compute references
  double epsilon_r = 1e-8;
  int threads = 1;
  std::string report_path;  // profile input
  std::string instance_json;              // single instance spec (JSON text)
  std::vector<std::string> instance_jsons;  // bench instance specs
};

/// Writes "k,F,F_gamma,G_norm,tau,delta,eta,cg_iters,s,elapsed_s" rows.
void write_trace_csv(const std::string& path, const IterateTrace& trace, bool timing);

/// Instance (de)serialization: family + params + seed + lambda and the
/// optional reference, as JSON.
std::string instance_to_json(const ProblemInstance& inst);
ProblemInstance instance_from_json(const std::string& json_text);

int run_generate(const RunConfig& cfg);
int run_solve(const RunConfig& cfg);
int run_bench(const RunConfig& cfg);
int run_profile(const RunConfig& cfg);

/// Full argv entry point (parses flags, dispatches, catches errors).
int main_impl(int argc, const char* const* argv);

}  // namespace cli
}  // namespace fbn
