#include "fbn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fbn/mmio.hpp"

namespace fbn {
namespace cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::runtime_error(where + ": unknown key '" + it.key() + "'");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SolverConfig solver_config_from_json(const json& obj) {
  reject_unknown_keys(obj,
                      {"gamma", "sigma", "eta_bar", "zeta", "rho", "newton_every", "max_iter",
                       "tol", "cg_max_iter", "record_iterates"},
                      "solver_config");
  SolverConfig c;
  if (obj.contains("gamma")) c.gamma = obj["gamma"].get<double>();
  if (obj.contains("sigma")) c.sigma = obj["sigma"].get<double>();
  if (obj.contains("eta_bar")) c.eta_bar = obj["eta_bar"].get<double>();
  if (obj.contains("zeta")) c.zeta = obj["zeta"].get<double>();
  if (obj.contains("rho")) c.rho = obj["rho"].get<double>();
  if (obj.contains("newton_every")) c.newton_every = obj["newton_every"].get<int>();
  if (obj.contains("max_iter")) c.max_iter = obj["max_iter"].get<int>();
  if (obj.contains("tol")) c.tol = obj["tol"].get<double>();
  if (obj.contains("cg_max_iter")) c.cg_max_iter = obj["cg_max_iter"].get<int>();
  if (obj.contains("record_iterates")) c.record_iterates = obj["record_iterates"].get<bool>();
  c.validate();
  return c;
}

double param_or(const json& obj, const std::string& key, double fallback) {
  return obj.contains(key) ? obj[key].get<double>() : fallback;
}

ProblemInstance build_instance(const json& spec) {
  reject_unknown_keys(spec,
                      {"family", "path", "seed", "n", "m", "density", "kappa", "sparsity",
                       "noise_scale", "nnz_per_row", "rank", "lambda", "lambda_rel", "a_path",
                       "b_path", "reference"},
                      "instance");
  if (spec.contains("path")) {
    std::ifstream in(spec["path"].get<std::string>());
    if (!in) throw std::runtime_error("instance: cannot open " + spec["path"].get<std::string>());
    std::stringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
  }
  std::string family = spec.at("family").get<std::string>();
  std::uint64_t seed = spec.contains("seed") ? spec["seed"].get<std::uint64_t>() : 1;

  ProblemInstance inst;
  if (family == "box_qp") {
    inst = gen_box_qp(static_cast<int>(param_or(spec, "n", 50)), param_or(spec, "density", 1.0),
                      param_or(spec, "kappa", 100.0), seed);
  } else if (family == "dual_qp") {
    inst = gen_dual_qp(static_cast<int>(param_or(spec, "n", 50)),
                       static_cast<int>(param_or(spec, "m", 100)),
                       param_or(spec, "kappa", 100.0), seed);
  } else if (family == "lasso") {
    inst = gen_lasso(static_cast<int>(param_or(spec, "m", 30)),
                     static_cast<int>(param_or(spec, "n", 100)),
                     param_or(spec, "sparsity", 0.05), seed, param_or(spec, "noise_scale", 0.01));
  } else if (family == "logreg") {
    inst = gen_logreg(static_cast<int>(param_or(spec, "m", 100)),
                      static_cast<int>(param_or(spec, "n", 1000)),
                      static_cast<int>(param_or(spec, "nnz_per_row", 50)), seed);
  } else if (family == "matcomp") {
    inst = gen_matcomp(static_cast<int>(param_or(spec, "m", 100)),
                       static_cast<int>(param_or(spec, "n", 100)),
                       static_cast<int>(param_or(spec, "rank", 10)),
                       param_or(spec, "density", 0.56), param_or(spec, "lambda", 1e-2), seed);
  } else if (family == "custom_lasso") {
    auto a_var = load_matrix_market(spec.at("a_path").get<std::string>());
    auto b_var = load_matrix_market(spec.at("b_path").get<std::string>());
    DenseMatrix a = std::holds_alternative<SparseMatrix>(a_var)
                        ? to_dense(std::get<SparseMatrix>(a_var))
                        : vec_to_mat(std::get<Vector>(a_var),
                                     static_cast<int>(std::get<Vector>(a_var).size()), 1);
    if (!std::holds_alternative<Vector>(b_var))
      throw std::runtime_error("custom_lasso: b must be an array-format vector");
    Vector b = std::get<Vector>(b_var);
    auto f = std::make_shared<LeastSquares>(a, b);
    int n = a.cols;
    inst.lambda_max = norm_inf(matvec_t(a, b));
    inst.lambda = spec.contains("lambda") ? spec["lambda"].get<double>() : 0.1 * inst.lambda_max;
    inst.lambda_family = [f, n](double lam) {
      return make_problem(f, std::make_shared<L1Norm>(n, lam));
    };
    inst.problem = inst.lambda_family(inst.lambda);
    inst.family = "custom_lasso";
    inst.seed = seed;
  } else {
    throw std::runtime_error("instance: unknown family '" + family + "'");
  }

  if (inst.lambda_family && (spec.contains("lambda") || spec.contains("lambda_rel"))) {
    double lam = spec.contains("lambda") ? spec["lambda"].get<double>()
                                         : spec["lambda_rel"].get<double>() * inst.lambda_max;
    inst.lambda = lam;
    inst.problem = inst.lambda_family(lam);
  }
  if (spec.contains("reference")) {
    const json& ref = spec["reference"];
    reject_unknown_keys(ref, {"f_star", "x_star"}, "instance.reference");
    inst.f_star = ref.at("f_star").get<double>();
    inst.x_star = ref.at("x_star").get<Vector>();
    inst.problem.f_star = inst.f_star;
    inst.problem.x_star = inst.x_star;
  }
  return inst;
}

}  // namespace

void write_trace_csv(const std::string& path, const IterateTrace& trace, bool timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "k,F,F_gamma,G_norm,tau,delta,eta,cg_iters,s,elapsed_s\n";
  for (const auto& r : trace.rows) {
    out << r.k << ',' << format_double(r.f_val) << ',' << format_double(r.fbe) << ','
        << format_double(r.g_norm) << ',' << format_double(r.tau) << ','
        << format_double(r.delta) << ',' << format_double(r.eta) << ',' << r.cg_iters << ','
        << r.s << ',' << format_double(timing ? r.elapsed_s : 0.0) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string instance_to_json(const ProblemInstance& inst) {
  json j;
  j["family"] = inst.family;
  j["seed"] = inst.seed;
  json params = json::object();
  for (const auto& [k, v] : inst.params) params[k] = v;
  j["params"] = params;
  if (inst.lambda > 0.0) j["lambda"] = inst.lambda;
  if (inst.lambda_max > 0.0) j["lambda_max"] = inst.lambda_max;
  if (inst.low_density_warning) j["low_density_warning"] = true;
  if (inst.has_reference()) {
    j["reference"] = {{"f_star", *inst.f_star}, {"x_star", *inst.x_star}};
  }
  return j.dump(2);
}

ProblemInstance instance_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  reject_unknown_keys(
      j, {"family", "seed", "params", "lambda", "lambda_max", "low_density_warning", "reference"},
      "instance file");
  json spec;
  spec["family"] = j.at("family");
  if (j.contains("seed")) spec["seed"] = j["seed"];
  if (j.contains("params"))
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) spec[it.key()] = it.value();
  if (j.contains("lambda")) spec["lambda"] = j["lambda"];
  if (j.contains("reference")) spec["reference"] = j["reference"];
  return build_instance(spec);
}

int run_generate(const RunConfig& cfg) {
  json spec = cfg.instance_json.empty() ? json::object() : json::parse(cfg.instance_json);
  if (cfg.seed) spec["seed"] = *cfg.seed;
  ProblemInstance inst = build_instance(spec);
  if (cfg.reference && !inst.has_reference()) {
    if (!compute_reference(inst))
      std::cerr << "warning: reference run did not certify below 1e-10\n";
  }
  std::filesystem::create_directories(cfg.out_dir);
  std::string path = cfg.out_dir + "/instance.json";
  std::ofstream out(path);
  out << instance_to_json(inst) << "\n";
  if (!out) throw std::runtime_error(path + ": write failed");
  std::cout << path << "\n";
  return kOk;
}

int run_solve(const RunConfig& cfg) {
  json spec = cfg.instance_json.empty() ? json::object() : json::parse(cfg.instance_json);
  if (cfg.seed) spec["seed"] = *cfg.seed;
  ProblemInstance inst = build_instance(spec);
  SolverFn solver = solver_by_name(cfg.solver);

  auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  if (cfg.continuation) {
    if (!inst.lambda_family)
      throw std::runtime_error("solve: instance family has no regularization path");
    res = continuation_solve(inst.lambda_family, inst.lambda_max, inst.lambda, cfg.solver_config,
                             zeros(inst.problem.dim()), solver);
  } else {
    res = solver(inst.problem, cfg.solver_config, zeros(inst.problem.dim()));
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::filesystem::create_directories(cfg.out_dir);
  write_trace_csv(cfg.out_dir + "/trace.csv", res.trace, cfg.timing);

  json summary;
  summary["family"] = inst.family;
  summary["seed"] = inst.seed;
  summary["solver"] = cfg.solver;
  summary["status"] = to_string(res.status);
  summary["iterations"] = res.trace.rows.empty() ? 0 : res.trace.rows.back().k;
  summary["cg_iterations"] = res.trace.total_cg_iters();
  summary["final_F"] = format_double(res.f_final);
  summary["final_G_norm"] = res.trace.rows.empty() ? 0.0 : res.trace.rows.back().g_norm;
  summary["gamma"] = res.trace.gamma;
  summary["stages"] = res.trace.stages;
  if (cfg.timing) summary["wall_s"] = wall;
  std::ofstream out(cfg.out_dir + "/summary.json");
  out << summary.dump(2) << "\n";
  if (!out) throw std::runtime_error("summary.json: write failed");

  return res.status == SolveStatus::converged ? kOk : kNotConverged;
}

int run_bench(const RunConfig& cfg) {
  if (cfg.instance_jsons.empty()) throw std::runtime_error("bench: no instances configured");
  if (cfg.solvers.empty()) throw std::runtime_error("bench: no solvers configured");

  std::vector<std::pair<std::string, ProblemInstance>> instances;
  for (std::size_t i = 0; i < cfg.instance_jsons.size(); ++i) {
    json spec = json::parse(cfg.instance_jsons[i]);
    ProblemInstance inst = build_instance(spec);
    std::string name = inst.family + "_" + std::to_string(i);
    if (!inst.has_reference() && cfg.reference) compute_reference(inst, 1e-12);
    instances.emplace_back(name, std::move(inst));
  }

  BenchmarkReport report =
      run_benchmark(instances, cfg.solvers, cfg.solver_config, cfg.epsilon_r, cfg.threads);

  std::filesystem::create_directories(cfg.out_dir);
  {
    std::ofstream out(cfg.out_dir + "/bench.csv");
    out << "instance,solver,valid,status,wall_s,outer_iters,cg_iters,final_F,final_G_norm,ratio\n";
    for (const auto& c : report.cells)
      out << c.instance << ',' << c.solver << ',' << (c.valid ? 1 : 0) << ','
          << to_string(c.status) << ',' << format_double(cfg.timing ? c.wall_s : 0.0) << ','
          << c.outer_iters << ',' << c.cg_iters << ',' << format_double(c.final_f) << ','
          << format_double(c.final_g_norm) << ',' << format_double(c.ratio) << '\n';
    if (!out) throw std::runtime_error("bench.csv: write failed");
  }
  {
    json j;
    j["epsilon_r"] = report.epsilon_r;
    j["parallel"] = report.parallel;
    if (report.parallel) j["wall_times_comparable"] = false;
    j["instances"] = report.instances;
    j["solvers"] = report.solvers;
    std::ofstream out(cfg.out_dir + "/report.json");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("report.json: write failed");
  }
  return kOk;
}

namespace {

BenchmarkReport report_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  BenchmarkReport report;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty report");
  std::set<std::string> instances, solvers;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    BenchCell cell;
    std::getline(ss, cell.instance, ',');
    std::getline(ss, cell.solver, ',');
    std::getline(ss, field, ',');
    cell.valid = field == "1";
    std::getline(ss, field, ',');
    cell.status = field == "converged" ? SolveStatus::converged
                                       : (field == "stalled" ? SolveStatus::stalled
                                                             : SolveStatus::max_iter);
    std::getline(ss, field, ',');
    cell.wall_s = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    cell.outer_iters = std::strtol(field.c_str(), nullptr, 10);
    std::getline(ss, field, ',');
    cell.cg_iters = std::strtol(field.c_str(), nullptr, 10);
    std::getline(ss, field, ',');
    cell.final_f = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    cell.final_g_norm = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    cell.ratio = field == "inf" ? std::numeric_limits<double>::infinity()
                                : std::strtod(field.c_str(), nullptr);
    instances.insert(cell.instance);
    solvers.insert(cell.solver);
    report.cells.push_back(std::move(cell));
  }
  report.instances.assign(instances.begin(), instances.end());
  report.solvers.assign(solvers.begin(), solvers.end());
  return report;
}

}  // namespace

int run_profile(const RunConfig& cfg) {
  if (cfg.report_path.empty()) throw std::runtime_error("profile: no report path configured");
  BenchmarkReport report = report_from_csv(cfg.report_path);
  PerformanceProfile profile = perf_profile(report);

  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream out(cfg.out_dir + "/profile.csv");
  out << "r";
  for (const auto& s : report.solvers) out << ',' << s;
  out << '\n';
  for (std::size_t gi = 0; gi < profile.grid.size(); ++gi) {
    out << format_double(profile.grid[gi]);
    for (const auto& s : report.solvers) out << ',' << format_double(profile.fractions[s][gi]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("profile.csv: write failed");
  return kOk;
}

int main_impl(int argc, const char* const* argv) {
  try {
    RunConfig cfg;
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
      std::cerr << "usage: fbncg <generate|solve|bench|profile> [--config path] [--seed n]\n"
                   "             [--out dir] [--solver name] [--tol t] [--max-iter n] [--threads n]\n";
      return kError;
    }
    cfg.command = args[0];

    std::optional<double> tol_override;
    std::optional<int> max_iter_override;
    for (std::size_t i = 1; i < args.size(); ++i) {
      auto need_value = [&](const char* flag) -> std::string {
        if (i + 1 >= args.size()) throw std::runtime_error(std::string(flag) + ": missing value");
        return args[++i];
      };
      if (args[i] == "--config") cfg.config_path = need_value("--config");
      else if (args[i] == "--seed") cfg.seed = std::stoull(need_value("--seed"));
      else if (args[i] == "--out") cfg.out_dir = need_value("--out");
      else if (args[i] == "--solver") cfg.solver = need_value("--solver");
      else if (args[i] == "--tol") tol_override = std::stod(need_value("--tol"));
      else if (args[i] == "--max-iter") max_iter_override = std::stoi(need_value("--max-iter"));
      else if (args[i] == "--threads") cfg.threads = std::stoi(need_value("--threads"));
      else throw std::runtime_error("unknown flag: " + args[i]);
    }

    if (!cfg.config_path.empty()) {
      std::ifstream in(cfg.config_path);
      if (!in) throw std::runtime_error(cfg.config_path + ": cannot open config");
      json j = json::parse(in);
      reject_unknown_keys(j,
                          {"command", "instance", "instances", "solver", "solvers",
                           "solver_config", "out", "seed", "threads", "timing", "epsilon_r",
                           "reference", "continuation", "report"},
                          "config");
      if (j.contains("command") && cfg.command.empty()) cfg.command = j["command"].get<std::string>();
      if (j.contains("instance")) cfg.instance_json = j["instance"].dump();
      if (j.contains("instances"))
        for (const auto& spec : j["instances"]) cfg.instance_jsons.push_back(spec.dump());
      if (j.contains("solver")) cfg.solver = j["solver"].get<std::string>();
      if (j.contains("solvers")) cfg.solvers = j["solvers"].get<std::vector<std::string>>();
      if (j.contains("solver_config")) cfg.solver_config = solver_config_from_json(j["solver_config"]);
      if (j.contains("out") && cfg.out_dir == ".") cfg.out_dir = j["out"].get<std::string>();
      if (j.contains("seed") && !cfg.seed) cfg.seed = j["seed"].get<std::uint64_t>();
      if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
      if (j.contains("timing")) cfg.timing = j["timing"].get<bool>();
      if (j.contains("epsilon_r")) cfg.epsilon_r = j["epsilon_r"].get<double>();
      if (j.contains("reference")) cfg.reference = j["reference"].get<bool>();
      if (j.contains("continuation")) cfg.continuation = j["continuation"].get<bool>();
      if (j.contains("report")) cfg.report_path = j["report"].get<std::string>();
    }
    if (tol_override) cfg.solver_config.tol = *tol_override;
    if (max_iter_override) cfg.solver_config.max_iter = *max_iter_override;
    cfg.solver_config.validate();
    if (!cfg.solvers.empty())
      for (const auto& s : cfg.solvers)
        if (!is_solver_name(s)) throw std::runtime_error("unknown solver: " + s);
    if (!is_solver_name(cfg.solver)) throw std::runtime_error("unknown solver: " + cfg.solver);

    if (cfg.command == "generate") return run_generate(cfg);
    if (cfg.command == "solve") return run_solve(cfg);
    if (cfg.command == "bench") return run_bench(cfg);
    if (cfg.command == "profile") return run_profile(cfg);
    throw std::runtime_error("unknown command: " + cfg.command);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace cli
}  // namespace fbn
