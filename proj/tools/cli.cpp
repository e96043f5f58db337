#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <laakso/ball.hpp>
#include <laakso/error.hpp>
#include <laakso/graph.hpp>
#include <laakso/walk.hpp>

namespace laakso::cli {

using io::json;

namespace {

template <typename T>
void read_if(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw Error(ErrorCode::kInvalidConfig, "unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
  reject_unknown(j,
                 {"profiles", "params", "k_max", "B_max", "G_max", "C0", "grid", "seed", "workers",
                  "trials", "caps", "thresholds", "psi_scale"},
                 "config");
  RunConfig c;
  const bool has_profiles = j.contains("profiles"), has_params = j.contains("params");
  if (has_profiles == has_params) {
    throw Error(ErrorCode::kInvalidConfig, "config needs exactly one of 'profiles' or 'params'");
  }
  try {
    if (has_profiles) {
      const json& p = j.at("profiles");
      reject_unknown(p, {"V", "Psi"}, "profiles");
      c.V = io::profile_from_json(p.at("V"));
      c.psi = io::profile_from_json(p.at("Psi"));
    } else {
      const json& p = j.at("params");
      reject_unknown(p, {"b", "g"}, "params");
      c.b = io::param_from_json(p.at("b"), false);
      c.g = io::param_from_json(p.at("g"), true);
    }
    read_if(j, "k_max", c.k_max);
    read_if(j, "B_max", c.B_max);
    read_if(j, "G_max", c.G_max);
    read_if(j, "C0", c.C0);
    read_if(j, "seed", c.plan.seed);
    read_if(j, "workers", c.workers);
    read_if(j, "trials", c.plan.trials);
    read_if(j, "psi_scale", c.plan.psi_scale);
    c.plan.k_max = c.k_max;
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"centers", "radii", "n_values", "deltas", "mc_radii", "green_n"}, "grid");
      read_if(g, "centers", c.plan.centers);
      read_if(g, "radii", c.plan.radii);
      read_if(g, "n_values", c.plan.n_values);
      read_if(g, "deltas", c.plan.deltas);
      read_if(g, "mc_radii", c.plan.mc_radii);
      read_if(g, "green_n", c.plan.green_n);
    }
    if (j.contains("caps")) {
      const json& g = j.at("caps");
      reject_unknown(g, {"vertices", "enumeration"}, "caps");
      read_if(g, "vertices", c.vertex_cap);
      read_if(g, "enumeration", c.enumeration_cap);
    }
    if (j.contains("thresholds")) {
      const json& g = j.at("thresholds");
      reject_unknown(g, {"volume", "exit_time", "hke", "green", "delta"}, "thresholds");
      read_if(g, "volume", c.plan.volume_threshold);
      read_if(g, "exit_time", c.plan.exit_threshold);
      read_if(g, "hke", c.plan.hke_threshold);
      read_if(g, "green", c.plan.green_threshold);
      read_if(g, "delta", c.plan.delta);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  if (c.vertex_cap <= 0 || c.enumeration_cap <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "caps must be positive");
  }
  if (c.workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be at least 1");
  if (!(c.plan.psi_scale > 0.0)) throw Error(ErrorCode::kInvalidConfig, "psi_scale must be positive");
  return c;
}

json resolved_config(const RunConfig& c) {
  json j;
  if (c.has_profiles()) {
    j["profiles"] = {{"V", io::to_json(*c.V)}, {"Psi", io::to_json(*c.psi)}};
  } else {
    j["params"] = {{"b", io::to_json(*c.b)}, {"g", io::to_json(*c.g)}};
  }
  j["k_max"] = c.k_max;
  j["B_max"] = c.B_max;
  j["G_max"] = c.G_max;
  j["C0"] = c.C0;
  j["seed"] = c.plan.seed;
  j["trials"] = c.plan.trials;
  j["psi_scale"] = c.plan.psi_scale;
  j["grid"] = {{"centers", c.plan.centers}, {"radii", c.plan.radii},       {"n_values", c.plan.n_values},
               {"deltas", c.plan.deltas},   {"mc_radii", c.plan.mc_radii}, {"green_n", c.plan.green_n}};
  j["caps"] = {{"vertices", c.vertex_cap}, {"enumeration", c.enumeration_cap}};
  j["thresholds"] = {{"volume", c.plan.volume_threshold}, {"exit_time", c.plan.exit_threshold},
                     {"hke", c.plan.hke_threshold},       {"green", c.plan.green_threshold},
                     {"delta", c.plan.delta}};
  return j;
}

std::pair<BranchingFunction, GluingFunction> resolve_params(const RunConfig& c) {
  if (!c.has_profiles()) return {*c.b, *c.g};
  const FitResult fit = fit_params(*c.V, *c.psi, c.k_max, c.B_max, c.G_max, c.C0);
  return {fit.b, fit.g};
}

namespace {

class Output {
 public:
  Output(std::ostream& out, std::string dir) : out_(out), dir_(std::move(dir)) {}

  void emit(const std::string& name, const std::string& content) {
    if (dir_.empty()) {
      out_ << content;
      return;
    }
    std::filesystem::create_directories(dir_);
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot write " + path.string());
    f << content;
  }

 private:
  std::ostream& out_;
  std::string dir_;
};

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot open config '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("config parse error: ") + e.what());
  }
}

std::string fd(double v) { return io::format_double(v); }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laakso-type graphs with prescribed volume growth and escape time"};
  app.name("laakso");
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> workers_flag;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--seed", seed_flag, "Seed for Monte Carlo streams (overrides config)");
  app.add_option("--workers", workers_flag, "Worker threads (overrides config)")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Write outputs into this directory instead of stdout");

  auto* fit_cmd = app.add_subcommand("fit", "Fit (b, g) to the configured profiles");
  auto* validate_cmd = app.add_subcommand("validate", "Check (b, g) against their invariants");

  std::string center = "root";
  int radius = 0;
  auto* ball_cmd = app.add_subcommand("ball", "Summarize a graph ball");
  ball_cmd->add_option("--center", center, "root, hub:k or u=...|x=...");
  ball_cmd->add_option("--radius", radius, "Ball radius")->required()->check(CLI::NonNegativeNumber);

  std::vector<int> radii;
  std::optional<std::int64_t> trials_flag;
  std::string method = "both";
  auto* exit_cmd = app.add_subcommand("exit-time", "Mean exit times from balls");
  exit_cmd->add_option("--center", center, "root, hub:k or u=...|x=...");
  exit_cmd->add_option("--radius", radii, "Radii (default: grid radii)");
  exit_cmd->add_option("--trials", trials_flag, "Monte Carlo trials (overrides config)");
  exit_cmd->add_option("--method", method, "exact, mc or both")->check(CLI::IsMember({"exact", "mc", "both"}));

  int n_max = 0;
  std::vector<std::string> targets;
  auto* hk_cmd = app.add_subcommand("heat-kernel", "Exact heat kernel p_n(x, y)");
  hk_cmd->add_option("--center", center, "Start vertex");
  hk_cmd->add_option("--n-max", n_max, "Largest step count")->required()->check(CLI::NonNegativeNumber);
  hk_cmd->add_option("--target", targets, "Target vertices (default: the center)");

  std::string gx = "root", gy = "root";
  auto* green_cmd = app.add_subcommand("green", "Green function partial sums");
  green_cmd->add_option("--x", gx, "First vertex");
  green_cmd->add_option("--y", gy, "Second vertex");
  green_cmd->add_option("--n-max", n_max, "Largest step count")->required()->check(CLI::NonNegativeNumber);

  auto* verify_cmd = app.add_subcommand("verify-all", "Run every configured envelope check");

  int level = 0;
  auto* export_cmd = app.add_subcommand("export-graph", "Export the induced ball of radius 2^level");
  export_cmd->add_option("--level", level, "Level n")->required()->check(CLI::Range(0, 20));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig cfg = parse_config(load_json_file(config_path));
    if (seed_flag) cfg.plan.seed = *seed_flag;
    if (workers_flag) cfg.workers = *workers_flag;
    if (trials_flag) cfg.plan.trials = *trials_flag;
    WalkOptions opts;
    opts.vertex_cap = cfg.vertex_cap;
    opts.workers = cfg.workers;
    Output output(out, out_dir);

    if (fit_cmd->parsed()) {
      json j;
      j["config"] = resolved_config(cfg);
      if (!cfg.has_profiles()) {
        j["fit"] = {{"source", "params"}, {"b", io::to_json(*cfg.b)}, {"g", io::to_json(*cfg.g)}};
        output.emit("fit.json", io::dump_json(j) + "\n");
        return 0;
      }
      const AdmissibilityReport adm = check_admissible(*cfg.V, *cfg.psi, cfg.C0, 0, cfg.k_max);
      j["admissibility"] = io::to_json(adm);
      if (!adm.admissible) {
        output.emit("fit.json", io::dump_json(j) + "\n");
        return kExitInadmissible;
      }
      j["fit"] = io::to_json(fit_params(*cfg.V, *cfg.psi, cfg.k_max, cfg.B_max, cfg.G_max, cfg.C0));
      j["fit"]["source"] = "profiles";
      output.emit("fit.json", io::dump_json(j) + "\n");
      return 0;
    }

    const auto [b, g] = resolve_params(cfg);

    if (validate_cmd->parsed()) {
      const auto v = validate(b, g, b.graph_mode() || g.graph_mode());
      json j{{"violations", io::to_json(v)}, {"valid", v.empty()}};
      output.emit("validate.json", io::dump_json(j) + "\n");
      return v.empty() ? 0 : kExitViolations;
    }

    const LaaksoGraph graph(b, g);

    if (ball_cmd->parsed()) {
      const LaaksoVertex c = graph.resolve_center(center);
      const BallSummary s = ball_summary(graph, c, radius, opts.ball());
      json j{{"center_id", vertex_id(c)},     {"center", c.serialize()},
             {"radius", s.radius},            {"vertex_count", s.vertex_count},
             {"degree_sum", s.degree_sum},    {"boundary_size", s.boundary_size}};
      output.emit("ball.json", io::dump_json(j) + "\n");
      return 0;
    }

    if (exit_cmd->parsed()) {
      const LaaksoVertex c = graph.resolve_center(center);
      if (radii.empty()) radii = cfg.plan.radii;
      const RandomStream stream(cfg.plan.seed, 0);
      std::ostringstream csv;
      csv << "center_id,r,mean,ci,trials\n";
      for (std::size_t i = 0; i < radii.size(); ++i) {
        if (method != "mc") {
          const auto e = exact_mean_exit_time(graph, c, radii[i], opts);
          csv << vertex_id(c) << ',' << radii[i] << ',' << fd(e.mean) << ',' << fd(0.0) << ",0\n";
        }
        if (method != "exact") {
          const auto m = simulate_exit_time(graph, c, radii[i], cfg.plan.trials, stream.child(i), opts);
          csv << vertex_id(c) << ',' << radii[i] << ',' << fd(m.mean) << ',' << fd(m.half_width) << ','
              << m.trials << '\n';
        }
      }
      output.emit("exit_time.csv", csv.str());
      return 0;
    }

    if (hk_cmd->parsed()) {
      const LaaksoVertex c = graph.resolve_center(center);
      std::vector<LaaksoVertex> ys;
      for (const auto& t : targets) ys.push_back(graph.resolve_center(t));
      if (ys.empty()) ys.push_back(c);
      std::ostringstream csv;
      csv << "n,y_id,p_n\n";
      for (const auto& r : heat_kernel(graph, c, n_max, ys, opts)) {
        csv << r.n << ',' << vertex_id(r.y) << ',' << fd(r.p_n) << '\n';
      }
      output.emit("heat_kernel.csv", csv.str());
      return 0;
    }

    if (green_cmd->parsed()) {
      const LaaksoVertex x = graph.resolve_center(gx), y = graph.resolve_center(gy);
      std::vector<double> series;
      if (x == LaaksoGraph::base() && y == x) {
        series = base_green_series(graph, n_max, opts);
      } else {
        double s = 0.0;
        for (const auto& r : heat_kernel(graph, x, n_max, {y}, opts)) {
          s += r.p_n;
          series.push_back(s);
        }
      }
      std::ostringstream csv;
      csv << "n,x_id,y_id,green\n";
      for (std::size_t n = 0; n < series.size(); ++n) {
        csv << n << ',' << vertex_id(x) << ',' << vertex_id(y) << ',' << fd(series[n]) << '\n';
      }
      output.emit("green.csv", csv.str());
      return 0;
    }

    if (verify_cmd->parsed()) {
      const VerifyOutcome res = verify_all(graph, cfg.plan, opts);
      json j;
      j["config"] = resolved_config(cfg);
      j["params"] = {{"b", io::to_json(b)}, {"g", io::to_json(g)}};
      j["checks"] = json::array();
      for (const auto& r : res.checks) j["checks"].push_back(io::to_json(r));
      j["fits"] = json::array();
      for (const auto& f : res.fits) j["fits"].push_back(io::to_json(f));
      j["monte_carlo"] = json::array();
      for (const auto& m : res.monte_carlo) j["monte_carlo"].push_back(io::to_json(m));
      j["transience"] = res.transience ? io::to_json(*res.transience)
                                       : json{{"verdict", "inconclusive"}, {"note", res.transience_note}};
      j["verdict"] = res.exit_code == 0 ? "pass" : "fail";
      j["exit_code"] = res.exit_code;
      output.emit("verify.json", io::dump_json(j) + "\n");
      return res.exit_code;
    }

    if (export_cmd->parsed()) {
      const BallGraph ball = induced_ball_graph(graph, level, opts.ball());
      const std::string dir = out_dir.empty() ? "." : out_dir;
      std::filesystem::create_directories(dir);
      std::ofstream edges(std::filesystem::path(dir) / "edges.csv", std::ios::binary);
      std::ofstream vertices(std::filesystem::path(dir) / "vertices.csv", std::ios::binary);
      if (!edges || !vertices) throw Error(ErrorCode::kInvalidConfig, "cannot write into " + dir);
      io::write_ball_csv(ball, edges, vertices);
      out << io::dump_json(json{{"level", level},
                                {"vertices", ball.size()},
                                {"edges", static_cast<std::int64_t>(ball.adj.size() / 2)},
                                {"edges_csv", (std::filesystem::path(dir) / "edges.csv").string()},
                                {"vertices_csv", (std::filesystem::path(dir) / "vertices.csv").string()}})
          << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace laakso::cli
