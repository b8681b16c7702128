#include "specbench/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "specbench/automaton.hpp"
#include "specbench/harness.hpp"
#include "specbench/semantics.hpp"
#include "specbench/specgen.hpp"
#include "specbench/syntax.hpp"

namespace specbench::cli {

namespace fs = std::filesystem;

namespace {

struct ExitError : std::runtime_error {
  ExitError(int code, const std::string& what) : std::runtime_error(what), code(code) {}
  int code;
};

[[noreturn]] void config_error(const std::string& what) { throw ExitError(kExitConfig, what); }

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) config_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ExitError(kExitRuntime, "cannot write '" + path.string() + "'");
  f << bytes;
}

nlohmann::json parse_config(const std::string& text) {
  if (text.empty()) return nlohmann::json::object();
  std::string body = text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    auto j = nlohmann::json::parse(body);
    if (!j.is_object()) config_error("--config must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    config_error(std::string("--config is not valid JSON: ") + e.what());
  }
}

std::vector<SpecRecord> load_specs(const std::string& source) {
  if (source.rfind("corpus:", 0) == 0) return corpus_by_name(source.substr(7));
  std::ifstream f(source);
  if (!f) config_error("cannot open spec file '" + source + "'");
  return read_corpus(f);
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("SPECBENCH_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    config_error(std::string("SPECBENCH_SEED is not an unsigned integer: ") + v);
  }
}

std::vector<Proposition> parse_alphabet(const std::string& csv) {
  std::vector<Proposition> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!is_valid_proposition_name(item)) config_error("invalid proposition '" + item + "'");
    out.emplace_back(item);
  }
  return out;
}

nlohmann::json obs_json(const Observation& o) {
  return {{"s_ap", o.s_ap}, {"s_not_ap", o.s_not_ap}};
}

nlohmann::json labels_json(const LabelSet& labels) {
  auto out = nlohmann::json::array();
  for (const auto& p : labels) out.push_back(p.name());
  return out;
}

nlohmann::json layout_json(const ObservationLayout& l) {
  auto slices = [](const std::vector<Slice>& v) {
    auto out = nlohmann::json::array();
    for (const auto& s : v) out.push_back({{"name", s.name}, {"offset", s.offset}, {"size", s.size}, {"unit", s.unit}});
    return out;
  };
  return {{"s_ap", slices(l.s_ap)}, {"s_not_ap", slices(l.s_not_ap)}};
}

// Shared by serve and rollout so both emit identical lines.
class Session {
 public:
  explicit Session(Env& env) : env_(env) {}

  nlohmann::json reset(std::uint64_t seed) {
    auto r = env_.reset(seed);
    restart_monitor();
    nlohmann::json j = {{"ok", true}, {"op", "reset"}, {"step", 0}, {"reward", 0.0},
                        {"terminal", false}, {"timeout", false}};
    put_obs(j, r.obs);
    j["propositions"] = labels_json(r.propositions);
    return j;
  }

  nlohmann::json step(const std::vector<Action>& joint) {
    auto r = env_.step(joint);
    nlohmann::json j = {{"ok", true}, {"op", "step"}, {"step", r.step}, {"reward", r.reward},
                        {"terminal", r.terminal}, {"timeout", r.timeout}};
    put_obs(j, r.obs);
    j["propositions"] = labels_json(r.propositions);
    if (automaton_) {
      progressed_ = progress(progressed_, r.propositions);
      auto ms = step_monitor(*automaton_, frontier_, r.propositions);
      frontier_ = std::move(ms.frontier);
      j["verdict"] = std::string(to_string(verdict_of(progressed_)));
      j["monitor"] = std::string(to_string(ms.status));
      j["accepting"] = ms.accepting_hit;
    }
    return j;
  }

  nlohmann::json set_spec(const std::string& text) {
    auto sigma = env_.alphabet();
    ParseOptions opts;
    opts.alphabet = sigma;
    formula_ = parse(text, opts);
    automaton_ = std::make_shared<BuchiAutomaton>(compile(formula_));
    restart_monitor();
    return {{"ok", true}, {"op", "spec"}, {"formula", format(formula_)}, {"states", automaton_->num_states()},
            {"verdict", std::string(to_string(verdict_of(progressed_)))}};
  }

 private:
  void put_obs(nlohmann::json& j, const std::vector<Observation>& obs) {
    j["obs"] = obs_json(obs.at(0));
    if (obs.size() > 1) {
      auto all = nlohmann::json::array();
      for (const auto& o : obs) all.push_back(obs_json(o));
      j["agents"] = std::move(all);
    }
  }

  void restart_monitor() {
    if (!automaton_) return;
    progressed_ = simplify(nnf(formula_));
    frontier_ = initial_frontier(*automaton_);
  }

  Env& env_;
  Formula formula_;
  std::shared_ptr<BuchiAutomaton> automaton_;
  Formula progressed_;
  Frontier frontier_;
};

std::vector<Action> parse_actions(const nlohmann::json& req, std::size_t n_agents) {
  std::vector<Action> joint;
  if (req.contains("actions")) {
    for (const auto& a : req.at("actions")) joint.push_back(a.get<Action>());
  } else if (req.contains("action")) {
    const auto& a = req.at("action");
    if (a.is_number()) {
      joint.push_back({a.get<double>()});
    } else {
      joint.push_back(a.get<Action>());
    }
  } else {
    throw ActionOutOfRange("step needs 'action' or 'actions'");
  }
  if (joint.size() != n_agents) throw ActionOutOfRange("expected one action per agent");
  return joint;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ActionOutOfRange*>(&e)) return "ActionOutOfRange";
  if (dynamic_cast<const SteppedAfterTerminal*>(&e)) return "SteppedAfterTerminal";
  if (dynamic_cast<const SyntaxError*>(&e)) return "SyntaxError";
  if (dynamic_cast<const UnknownProposition*>(&e)) return "UnknownProposition";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const PlacementFailure*>(&e)) return "PlacementFailure";
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return "ProtocolError";
  return "Error";
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return ss.str();
}

nlohmann::json hello_message(const Env& env) {
  auto space = env.action_space();
  auto alphabet = nlohmann::json::array();
  for (const auto& p : env.alphabet()) alphabet.push_back(p.name());
  return {{"type", "hello"},
          {"protocol", kProtocolVersion},
          {"engine", "specbench"},
          {"version", kVersion},
          {"env", env.id()},
          {"n_agents", env.n_agents()},
          {"horizon", env.horizon()},
          {"action_space", {{"discrete", space.discrete}, {"dim", space.dim}}},
          {"alphabet", alphabet},
          {"layout", layout_json(env.layout())}};
}

void serve(Env& env, std::istream& in, std::ostream& out) {
  Session session(env);
  out << hello_message(env).dump() << '\n' << std::flush;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json reply;
    nlohmann::json id;
    bool close = false;
    try {
      auto req = nlohmann::json::parse(line);
      if (req.contains("id")) id = req.at("id");
      const std::string op = req.at("op").get<std::string>();
      if (op == "reset") {
        reply = session.reset(req.value("seed", std::uint64_t{0}));
      } else if (op == "step") {
        reply = session.step(parse_actions(req, env.n_agents()));
      } else if (op == "spec") {
        reply = session.set_spec(req.at("formula").get<std::string>());
      } else if (op == "close") {
        reply = {{"ok", true}, {"op", "close"}};
        close = true;
      } else {
        reply = {{"ok", false}, {"kind", "ProtocolError"}, {"error", "unknown op '" + op + "'"}};
      }
    } catch (const std::exception& e) {
      reply = {{"ok", false}, {"kind", error_kind(e)}, {"error", e.what()}};
    }
    if (!id.is_null()) reply["id"] = id;
    out << reply.dump() << '\n' << std::flush;
    if (close) return;
  }
}

namespace {

struct EvalOptions {
  std::string env = "letter";
  std::string env_config;
  std::string specs;
  std::string agent = "random";
  std::size_t seeds = 5;
  std::size_t episodes = 100;
  std::uint64_t seed_base = 0;
  std::size_t eval_horizon = 0;
  bool trajectories = false;
  unsigned jobs = 1;
  std::string out_dir;
  std::string manifest;
};

nlohmann::json eval_config_json(const EvalOptions& o, const nlohmann::json& env_config) {
  return {{"env", o.env},         {"env_config", env_config},   {"specs", o.specs},
          {"agent", o.agent},     {"seeds", o.seeds},           {"episodes", o.episodes},
          {"seed_base", o.seed_base}, {"eval_horizon", o.eval_horizon}, {"trajectories", o.trajectories}};
}

int cmd_eval(EvalOptions o, std::ostream& out) {
  if (!o.manifest.empty()) {
    nlohmann::json m;
    try {
      m = nlohmann::json::parse(read_file(o.manifest));
      const auto& c = m.at("config");
      o.env = c.at("env");
      o.env_config = c.at("env_config").dump();
      o.specs = c.at("specs");
      o.agent = c.at("agent");
      o.seeds = c.at("seeds");
      o.episodes = c.at("episodes");
      o.seed_base = c.at("seed_base");
      o.eval_horizon = c.at("eval_horizon");
      o.trajectories = c.at("trajectories");
    } catch (const nlohmann::json::exception& e) {
      config_error(std::string("bad manifest: ") + e.what());
    }
  } else if (auto s = env_seed()) {
    o.seed_base = *s;
  }
  if (o.specs.empty()) config_error("--specs is required");
  if (o.out_dir.empty()) config_error("--out is required");
  const auto env_config = parse_config(o.env_config);
  auto specs = load_specs(o.specs);
  if (specs.empty()) config_error("no specifications in '" + o.specs + "'");
  make_agent(o.agent);
  make_env(o.env, env_config);

  EvalConfig cfg;
  cfg.n_seeds = o.seeds;
  cfg.n_episodes = o.episodes;
  cfg.seed_base = o.seed_base;
  cfg.eval_horizon = o.eval_horizon;
  cfg.jobs = o.jobs;
  cfg.record_trajectories = o.trajectories;
  auto report = evaluate([&] { return make_env(o.env, env_config); }, specs,
                         [&] { return make_agent(o.agent); }, cfg);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  std::ostringstream csv, summary;
  report.write_csv(csv);
  report.write_summary_csv(summary);
  std::ostringstream spec_text;
  write_corpus(spec_text, specs);

  nlohmann::json manifest;
  manifest["tool"] = "specbench";
  manifest["version"] = kVersion;
  manifest["command"] = "eval";
  manifest["config"] = eval_config_json(o, env_config);
  auto indices = nlohmann::json::array();
  for (std::size_t i = 0; i < o.seeds; ++i) indices.push_back(i);
  manifest["seeds"] = {{"base", o.seed_base}, {"indices", indices}};
  manifest["specs_sha256"] = sha256_hex(spec_text.str());
  nlohmann::json artifacts = {{"report.csv", sha256_hex(csv.str())}, {"summary.csv", sha256_hex(summary.str())}};
  write_file(dir / "report.csv", csv.str());
  write_file(dir / "summary.csv", summary.str());
  if (o.trajectories) {
    std::string jsonl;
    for (const auto& line : report.trajectories) jsonl += line + "\n";
    write_file(dir / "trajectories.jsonl", jsonl);
    artifacts["trajectories.jsonl"] = sha256_hex(jsonl);
  }
  manifest["artifacts"] = artifacts;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << report.rows.size() << " rows to " << (dir / "report.csv").string() << '\n';
  return kExitOk;
}

int cmd_compile(const std::string& text, bool dump, std::string domain_name, std::ostream& out) {
  Formula f = parse(text);
  auto a = compile(f);
  out << "states: " << a.num_states() << ", accepting: " << a.accepting_states().size()
      << ", dead: " << a.dead_states().size() << '\n';
  out << "edges: " << a.edges().size() << '\n';
  auto list = [&](const char* name, const std::vector<StateId>& ids) {
    out << name << ':';
    for (auto s : ids) out << ' ' << s;
    out << '\n';
  };
  list("accepting states", a.accepting_states());
  list("dead states", a.dead_states());
  list("satisfied sinks", a.sat_sink_states());
  if (a.language_empty()) {
    out << "language: empty\n";
  } else {
    out << "language: nonempty\n";
    // Specs that need simultaneous atoms have no path under the exclusive domain.
    std::vector<SubgoalPath> paths;
    if (domain_name == "exclusive") {
      try {
        paths = extract_subgoal_sequences(a, 1, AssignmentDomain::exclusive());
      } catch (const std::runtime_error&) {
      }
    }
    if (paths.empty()) {
      domain_name = "all";
      paths = extract_subgoal_sequences(a, 1, AssignmentDomain::all());
    }
    const auto& path = paths.at(0);
    out << "subgoal path (" << domain_name << " domain):";
    for (auto s : path.states) out << ' ' << s;
    out << '\n';
    for (const auto& step : path.steps) {
      out << "  " << step.from << " -> " << step.to << " reach";
      for (const auto& r : step.reach) out << ' ' << to_string(r);
      out << " avoid";
      for (const auto& r : step.avoid) out << ' ' << to_string(r);
      out << '\n';
    }
  }
  if (dump) write_dump(out, a);
  return kExitOk;
}

int cmd_oracle(const std::string& env_id, const std::string& layout_path, const std::string& spec, std::ostream& out) {
  if (env_id != "letter") config_error("the optimal-steps oracle is defined for the letter env only");
  LetterLayout layout;
  try {
    auto raw = nlohmann::json::parse(read_file(layout_path));
    if (raw.contains("reset")) raw = raw.at("reset").at("state");
    layout = LetterLayout::from_json(raw);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("bad layout file: ") + e.what());
  }
  auto best = optimal_steps_letter(layout, parse(spec));
  out << "steps: " << best.steps << '\n' << "normalized: " << format_number(best.normalized) << '\n';
  return kExitOk;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      config_error("not an integer list: '" + csv + "'");
    }
  }
  return out;
}

struct PlotOptions {
  std::string family = "reach_avoid";
  std::string n_seq = "2,4,6,8,10";
  std::string n_disj = "0,1,2";
  std::string env = "letter";
  std::string agent = "bfs";
  std::size_t seeds = 5;
  std::size_t episodes = 100;
  std::size_t samples = 1;
  std::uint64_t seed_base = 0;
  unsigned jobs = 1;
  std::string out;
};

int cmd_plot_data(PlotOptions o, std::ostream& out) {
  if (auto s = env_seed()) o.seed_base = *s;
  const bool reach_only = o.family == "reach_only";
  if (!reach_only && o.family != "reach_avoid") config_error("--family must be reach_only or reach_avoid");
  auto probe = make_env(o.env);
  const auto atoms = probe->alphabet();
  std::vector<Proposition> sigma(atoms.begin(), atoms.end());
  make_agent(o.agent);

  std::ostringstream csv;
  csv << "family,n_seq,n_disj,metric,mean,std,n\n";
  for (int n_seq : parse_int_list(o.n_seq)) {
    for (int n_disj : parse_int_list(o.n_disj)) {
      Rng rng(mix64(o.seed_base, static_cast<std::uint64_t>(n_seq), static_cast<std::uint64_t>(n_disj)));
      std::vector<SpecRecord> specs;
      for (std::size_t k = 0; k < o.samples; ++k) {
        auto r = reach_only ? sample_reach_only(n_seq, n_disj, sigma, rng, AtomDraw::Reuse)
                            : sample_reach_avoid(n_seq, n_disj, sigma, rng, AtomDraw::Reuse);
        r.id += "." + std::to_string(k);
        specs.push_back(std::move(r));
      }
      EvalConfig cfg;
      cfg.n_seeds = o.seeds;
      cfg.n_episodes = o.episodes;
      cfg.seed_base = o.seed_base;
      cfg.jobs = o.jobs;
      auto report = evaluate([&] { return make_env(o.env); }, specs, [&] { return make_agent(o.agent); }, cfg);
      // Pool every (sample, seed) row of the cell.
      std::map<std::string, std::vector<double>> values;
      for (const auto& row : report.rows) {
        values["eta_s"].push_back(row.eta_s());
        values["eta_v"].push_back(row.eta_v());
        values["eta_o"].push_back(row.eta_o());
        if (auto mu = row.mu()) {
          values["mu"].push_back(*mu);
          values["mu_per_stage"].push_back(*mu / n_seq);
        }
      }
      for (const char* metric : {"eta_s", "eta_v", "eta_o", "mu", "mu_per_stage"}) {
        const auto& xs = values[metric];
        std::optional<double> mean, sd;
        if (!xs.empty()) {
          double sum = 0.0;
          for (double x : xs) sum += x;
          mean = sum / static_cast<double>(xs.size());
          if (xs.size() > 1) {
            double ss = 0.0;
            for (double x : xs) ss += (x - *mean) * (x - *mean);
            sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
          }
        }
        csv << o.family << ',' << n_seq << ',' << n_disj << ',' << metric << ',' << format_number(mean) << ','
            << format_number(sd) << ',' << xs.size() << '\n';
      }
    }
  }
  if (o.out.empty() || o.out == "-") {
    out << csv.str();
  } else {
    write_file(o.out, csv.str());
  }
  return kExitOk;
}

int cmd_rollout(const std::string& env_id, const std::string& env_config, std::uint64_t seed,
                const std::string& actions_path, const std::string& spec, std::ostream& out) {
  auto env = make_env(env_id, parse_config(env_config));
  nlohmann::json actions;
  try {
    actions = nlohmann::json::parse(read_file(actions_path));
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("actions file is not JSON: ") + e.what());
  }
  if (!actions.is_array()) config_error("actions file must hold a JSON array");
  Session session(*env);
  if (!spec.empty()) session.set_spec(spec);
  out << session.reset(seed).dump() << '\n';
  for (const auto& a : actions) {
    nlohmann::json req = a.is_object() ? a : nlohmann::json{{"action", a}};
    auto reply = session.step(parse_actions(req, env->n_agents()));
    out << reply.dump() << '\n';
    if (reply.at("terminal").get<bool>() || reply.at("timeout").get<bool>()) break;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Specification-guided RL benchmark engine", "specbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Export a fixed specification corpus");
  std::string corpus_name;
  std::string corpus_out;
  bool corpus_list = false;
  corpus_cmd->add_option("--name", corpus_name, "Corpus name, e.g. letter_ind or table4");
  corpus_cmd->add_option("--out", corpus_out, "Output file (default stdout)");
  corpus_cmd->add_flag("--list", corpus_list, "List corpus names");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Sample reach-only or reach-avoid specifications");
  std::string sample_family = "reach_avoid";
  int sample_n_seq = 2, sample_n_disj = 0;
  std::size_t sample_count = 1;
  std::uint64_t sample_seed = 0;
  std::string sample_alphabet = "a,b,c,d,e,f,g,h,i,j,k,l";
  bool sample_reuse = false;
  sample_cmd->add_option("--family", sample_family, "reach_only or reach_avoid")
      ->check(CLI::IsMember({"reach_only", "reach_avoid"}));
  sample_cmd->add_option("--n-seq", sample_n_seq, "Number of sequential stages")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--n-disj", sample_n_disj, "Extra disjuncts per stage")->check(CLI::NonNegativeNumber);
  sample_cmd->add_option("--count", sample_count, "Number of samples");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed");
  sample_cmd->add_option("--alphabet", sample_alphabet, "Comma-separated propositions");
  sample_cmd->add_flag("--reuse", sample_reuse, "Allow atoms to repeat across non-adjacent stages");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate an agent on a set of specifications");
  EvalOptions eval_opts;
  eval_cmd->add_option("--env", eval_opts.env, "Environment id");
  eval_cmd->add_option("--config", eval_opts.env_config, "Env config overrides as JSON or @file");
  eval_cmd->add_option("--specs", eval_opts.specs, "Spec file or corpus:NAME");
  eval_cmd->add_option("--agent", eval_opts.agent, "random, bfs or greedy");
  eval_cmd->add_option("--seeds", eval_opts.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--episodes", eval_opts.episodes, "Episodes per seed")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed-base", eval_opts.seed_base, "Base seed (SPECBENCH_SEED overrides)");
  eval_cmd->add_option("--eval-horizon", eval_opts.eval_horizon, "Steps for infinite-horizon specs (0: 10x env horizon)");
  eval_cmd->add_flag("--trajectories", eval_opts.trajectories, "Write trajectories.jsonl");
  eval_cmd->add_option("--jobs", eval_opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval_opts.out_dir, "Output directory");
  eval_cmd->add_option("--manifest", eval_opts.manifest, "Re-run the configuration stored in a manifest");

  // compile
  auto* compile_cmd = app.add_subcommand("compile", "Compile a formula and print automaton facts");
  std::string compile_formula;
  bool compile_dump = false;
  std::string compile_domain = "exclusive";
  compile_cmd->add_option("--formula", compile_formula, "Formula text")->required();
  compile_cmd->add_flag("--dump", compile_dump, "Print the automaton dump");
  compile_cmd->add_option("--domain", compile_domain, "Assignment domain for subgoals")
      ->check(CLI::IsMember({"exclusive", "all"}));

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Optimal steps on a LetterWorld layout");
  std::string oracle_env = "letter", oracle_layout, oracle_spec;
  oracle_cmd->add_option("--env", oracle_env, "Environment id");
  oracle_cmd->add_option("--layout", oracle_layout, "Raw-state JSON file")->required();
  oracle_cmd->add_option("--spec", oracle_spec, "Formula text")->required();

  // plot-data
  auto* plot_cmd = app.add_subcommand("plot-data", "Metrics over an (n_seq, n_disj) grid as CSV");
  PlotOptions plot;
  plot_cmd->add_option("--family", plot.family, "reach_only or reach_avoid");
  plot_cmd->add_option("--n-seq", plot.n_seq, "Comma-separated n_seq values");
  plot_cmd->add_option("--n-disj", plot.n_disj, "Comma-separated n_disj values");
  plot_cmd->add_option("--env", plot.env, "Environment id");
  plot_cmd->add_option("--agent", plot.agent, "Agent name");
  plot_cmd->add_option("--seeds", plot.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--episodes", plot.episodes, "Episodes per seed")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--samples", plot.samples, "Sampled specs per cell")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--seed-base", plot.seed_base, "Base seed (SPECBENCH_SEED overrides)");
  plot_cmd->add_option("--jobs", plot.jobs, "Worker threads")->check(CLI::PositiveNumber);
  plot_cmd->add_option("--out", plot.out, "Output CSV (default stdout)");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "JSON-lines environment server on stdin/stdout");
  std::string serve_env = "letter", serve_config;
  serve_cmd->add_option("--env", serve_env, "Environment id");
  serve_cmd->add_option("--config", serve_config, "Env config overrides as JSON or @file");

  // rollout
  auto* rollout_cmd = app.add_subcommand("rollout", "Replay an action script and print the serve-format trace");
  std::string rollout_env = "letter", rollout_config, rollout_actions, rollout_spec;
  std::uint64_t rollout_seed = 0;
  rollout_cmd->add_option("--env", rollout_env, "Environment id");
  rollout_cmd->add_option("--config", rollout_config, "Env config overrides as JSON or @file");
  rollout_cmd->add_option("--seed", rollout_seed, "Reset seed");
  rollout_cmd->add_option("--actions", rollout_actions, "JSON array of actions")->required();
  rollout_cmd->add_option("--spec", rollout_spec, "Formula to monitor");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (corpus_cmd->parsed()) {
      if (corpus_list) {
        for (const auto& n : corpus_names()) out << n << '\n';
        return kExitOk;
      }
      if (corpus_name.empty()) config_error("--name is required");
      std::ostringstream ss;
      write_corpus(ss, corpus_by_name(corpus_name));
      if (corpus_out.empty()) {
        out << ss.str();
      } else {
        write_file(corpus_out, ss.str());
      }
      return kExitOk;
    }
    if (sample_cmd->parsed()) {
      if (auto s = env_seed()) sample_seed = *s;
      Rng rng(sample_seed);
      auto sigma = parse_alphabet(sample_alphabet);
      const auto draw = sample_reuse ? AtomDraw::Reuse : AtomDraw::Strict;
      std::vector<SpecRecord> specs;
      for (std::size_t i = 0; i < sample_count; ++i) {
        auto r = sample_family == "reach_only" ? sample_reach_only(sample_n_seq, sample_n_disj, sigma, rng, draw)
                                               : sample_reach_avoid(sample_n_seq, sample_n_disj, sigma, rng, draw);
        r.id += "." + std::to_string(i + 1);
        specs.push_back(std::move(r));
      }
      write_corpus(out, specs);
      return kExitOk;
    }
    if (eval_cmd->parsed()) return cmd_eval(eval_opts, out);
    if (compile_cmd->parsed()) return cmd_compile(compile_formula, compile_dump, compile_domain, out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_env, oracle_layout, oracle_spec, out);
    if (plot_cmd->parsed()) return cmd_plot_data(plot, out);
    if (serve_cmd->parsed()) {
      auto env = make_env(serve_env, parse_config(serve_config));
      serve(*env, in, out);
      return kExitOk;
    }
    if (rollout_cmd->parsed()) {
      return cmd_rollout(rollout_env, rollout_config, rollout_seed, rollout_actions, rollout_spec, out);
    }
  } catch (const ExitError& e) {
    err << "error: " << e.what() << '\n';
    return e.code;
  } catch (const Unreachable& e) {
    err << "unreachable: " << e.what() << '\n';
    return kExitUnreachable;
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnknownProposition& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CompileBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    // ConfigError, UnknownCorpus, AlphabetMismatch, InsufficientAlphabet.
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace specbench::cli
