#pragma once

// The dyadic-density command line: estimate, simulate, adversary.
// run_cli() takes its streams as arguments so tests can drive it in-process.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <dyadic/dyadic.hpp>

namespace dyadic::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  ok = 0,
  failure = 1,
  usage = 2,
  empty_input = 3,
  zero_estimate = 4,
  bad_number = 5,
  out_of_range = 6,
  adversary_failed = 7,
};

inline DepthSchedule parse_depth(const std::string& spec) {
  if (spec == "auto")
    return DepthSchedule::log2();
  const auto v = parse_number(spec);
  if (!v || *v < 1 || *v != static_cast<double>(static_cast<int>(*v)))
    throw CLI::ValidationError("--depth", "expected a positive integer or 'auto'");
  return DepthSchedule::fixed(static_cast<int>(*v));
}

inline nlohmann::json config_json(const EstimatorConfig& config,
                                  const std::string& depth_spec) {
  return {{"alpha", config.budget.describe()},
          {"depth", depth_spec},
          {"level_cap", config.level_cap}};
}

struct SourceSpec {
  std::unique_ptr<SequenceSource> source;
  bool stochastic = false;
};

/// uniform | normal | exponential | rademacher:k | stratified:k |
/// ar1:rho,sigma | circle:width | vdc
inline SourceSpec make_source(const std::string& spec,
                              std::optional<std::uint64_t> seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto numbers = [&](std::size_t expected) {
    std::istringstream in(args);
    auto v = read_numbers(in);
    if (v.size() != expected)
      throw CLI::ValidationError("--source", "'" + spec + "' needs " +
                                                 std::to_string(expected) +
                                                 " parameter(s)");
    return v;
  };
  auto need_seed = [&]() {
    if (!seed)
      throw CLI::ValidationError("--seed",
                                 "source '" + spec + "' is stochastic and needs --seed");
    return *seed;
  };
  auto level = [&]() {
    const double k = numbers(1)[0];
    if (k < 1 || k > 24 || k != static_cast<double>(static_cast<int>(k)))
      throw CLI::ValidationError("--source", "level must be an integer in [1, 24]");
    return static_cast<int>(k);
  };

  SourceSpec out;
  if (kind == "uniform") {
    out.source = std::make_unique<IidSource>(ContinuousDensity::uniform(0, 1), need_seed());
    out.stochastic = true;
  } else if (kind == "normal") {
    out.source = std::make_unique<IidSource>(ContinuousDensity::normal(0, 1), need_seed());
    out.stochastic = true;
  } else if (kind == "exponential") {
    out.source = std::make_unique<IidSource>(ContinuousDensity::exponential(1), need_seed());
    out.stochastic = true;
  } else if (kind == "rademacher") {
    const int k = level();
    out.source = std::make_unique<IidSource>(rademacher_density<double>(k), need_seed());
    out.stochastic = true;
  } else if (kind == "stratified") {
    out.source = std::make_unique<StratifiedRademacherSource>(level());
  } else if (kind == "ar1") {
    const auto v = numbers(2);
    out.source = std::make_unique<Ar1Source>(v[0], v[1], need_seed());
    out.stochastic = true;
  } else if (kind == "circle") {
    const auto v = numbers(1);
    out.source = std::make_unique<CircleWalkSource>(v[0], need_seed());
    out.stochastic = true;
  } else if (kind == "vdc") {
    out.source = std::make_unique<VanDerCorputSource>();
  } else {
    throw CLI::ValidationError("--source", "unknown source '" + spec + "'");
  }
  return out;
}

inline void write_output(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

struct EstimateArgs {
  std::string input = "-";
  std::string alpha;
  std::string depth = "auto";
  std::string format = "json";
  int level_cap = max_level;
  int window = 0;
  std::vector<std::uint64_t> seeds;
};

inline int cmd_estimate(const EstimateArgs& a, std::istream& in,
                        std::ostream& out, std::ostream& err) {
  const EstimatorConfig config(parse_budget(a.alpha), parse_depth(a.depth),
                               a.level_cap);
  std::vector<double> values;
  if (a.input == "-") {
    values = read_numbers(in);
  } else {
    std::ifstream file(a.input);
    if (!file)
      throw std::runtime_error("cannot open '" + a.input + "'");
    values = read_numbers(file);
  }
  if (values.empty()) {
    err << "error: no samples in input\n";
    return empty_input;
  }
  SampleBuffer buffer;
  for (double x : values)
    buffer.append(x);

  const EstimateReport report = estimate(buffer, config);
  err << "n = " << report.n << ", b_n = " << report.depth << ", k_n = "
      << (report.level ? std::to_string(*report.level) : std::string("none"))
      << "\n";
  err << "k\ti\tV(h_nk:-i,i)\t4*alpha(i)\n";
  for (const auto& level : report.audit)
    for (std::size_t i = 0; i < level.window_variation.size(); ++i) {
      const auto w = static_cast<std::int64_t>(i + 1);
      if (a.window > 0 && w > a.window)
        break;
      err << level.level << '\t' << w << '\t'
          << format_number(level.window_variation[i]) << '\t'
          << format_number(4.0 * config.budget(w)) << '\n';
    }

  if (a.format == "csv")
    out << to_csv(report.density);
  else
    out << to_json(report.density).dump() << "\n";
  if (!report.level) {
    err << "note: no level met the variation budget; emitted the zero estimate\n";
    return zero_estimate;
  }
  return ok;
}

struct SimulateArgs {
  std::string source;
  std::vector<std::size_t> checkpoints;
  std::vector<std::uint64_t> seeds;
  std::string alpha = "const:3";
  std::string depth = "auto";
  std::string format = "csv";
  std::string out_path;
  int level_cap = max_level;
};

inline int cmd_simulate(const SimulateArgs& a, std::ostream& out,
                        std::ostream& err) {
  if (a.seeds.size() > 1)
    throw CLI::ValidationError("--seed", "give at most one seed per run");
  const std::optional<std::uint64_t> seed =
      a.seeds.empty() ? std::nullopt : std::optional(a.seeds.front());
  const EstimatorConfig config(parse_budget(a.alpha), parse_depth(a.depth),
                               a.level_cap);
  auto src = make_source(a.source, seed);
  const auto rows = convergence_report(*src.source, config, a.checkpoints);
  for (const auto& r : rows)
    if (r.tail_bound > 1e-6)
      err << "warning: n = " << r.n << " tail bound " << r.tail_bound << "\n";

  std::string text;
  if (a.format == "json") {
    auto cfg = config_json(config, a.depth);
    cfg["source"] = src.source->describe();
    cfg["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    text = report_json(rows, cfg).dump(2) + "\n";
  } else {
    text = report_csv(rows);
  }
  write_output(a.out_path, text, out);
  return ok;
}

struct AdversaryArgs {
  std::string scheme;
  int levels = 0;
  std::size_t budget = 1'000'000;
  double growth = 1.25;
  std::size_t sequence_cap = 100'000;
  std::string out_path;
};

inline Scheme make_scheme(const std::string& spec) {
  const std::string phi = "phi-star:";
  const std::string fixed = "fixed-k:";
  if (spec.rfind(phi, 0) == 0)
    return phi_star_scheme(EstimatorConfig(parse_budget(spec.substr(phi.size()))));
  if (spec.rfind(fixed, 0) == 0) {
    const auto k = parse_number(spec.substr(fixed.size()));
    if (!k || *k < 1 || *k > max_level ||
        *k != static_cast<double>(static_cast<int>(*k)))
      throw CLI::ValidationError("--scheme", "fixed-k needs an integer level");
    return fixed_level_scheme(static_cast<int>(*k));
  }
  throw CLI::ValidationError("--scheme", "expected phi-star:<alpha> or fixed-k:<k>");
}

inline int cmd_adversary(const AdversaryArgs& a, std::ostream& out,
                         std::ostream& err) {
  if (a.levels < 2)
    throw CLI::ValidationError("--levels", "the construction needs K >= 2");
  const Scheme scheme = make_scheme(a.scheme);
  AdversaryOptions opts;
  opts.step_budget = a.budget;
  opts.growth = a.growth;

  AdversaryTranscript transcript;
  std::string status = "complete";
  int code = ok;
  try {
    transcript = adversarial_sequence(scheme, a.levels, opts);
  } catch (const adversary_error& e) {
    transcript = e.partial();
    status = adversary_error::diagnostic(e.kind());
    err << "error: " << e.what() << "\n";
    code = adversary_failed;
  }

  err << "k\tn_k\tl1(phi,h_k)\tDelta_k\n";
  for (const auto& c : transcript.certificates)
    err << c.level << '\t' << c.n << '\t' << format_number(c.l1_to_target)
        << '\t' << format_number(c.delta) << '\n';
  err << "k\tl1(phi_{n_k}, phi_{n_{k+1}})\n";
  for (std::size_t s = 0; s < transcript.oscillations.size(); ++s)
    err << transcript.certificates[s].level << '\t'
        << format_number(transcript.oscillations[s]) << '\n';

  auto j = transcript_json(transcript, a.sequence_cap);
  j["scheme"] = a.scheme;
  j["levels"] = a.levels;
  j["step_budget"] = a.budget;
  j["status"] = status;
  write_output(a.out_path, j.dump(2) + "\n", out);
  return code;
}

/// Flat "key = value" lines ('#' and ';' start comments, values may be
/// quoted). Each key becomes "--key value" unless the flag is already on the
/// command line, so flags always win.
inline void expand_config(std::vector<std::string>& args) {
  std::string path;
  for (std::size_t a = 1; a < args.size(); ++a) {
    if (args[a] == "--config" && a + 1 < args.size())
      path = args[a + 1];
    else if (args[a].rfind("--config=", 0) == 0)
      path = args[a].substr(9);
  }
  if (path.empty())
    return;
  std::ifstream file(path);
  if (!file)
    throw std::runtime_error("cannot open config file '" + path + "'");
  auto trim = [](std::string v) {
    const auto b = v.find_first_not_of(" \t\r");
    if (b == std::string::npos)
      return std::string();
    const auto e = v.find_last_not_of(" \t\r");
    v = v.substr(b, e - b + 1);
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
      v = v.substr(1, v.size() - 2);
    return v;
  };
  auto given = [&](const std::string& flag) {
    for (std::size_t a = 1; a < args.size(); ++a)
      if (args[a] == flag || args[a].rfind(flag + "=", 0) == 0)
        return true;
    return false;
  };
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(file, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == ';')
      continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key=value");
    const std::string key = trim(body.substr(0, eq));
    if (key.empty() || key == "config")
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": bad key '" + key + "'");
    const std::string flag = "--" + key;
    if (!given(flag)) {
      extra.push_back(flag);
      extra.push_back(trim(body.substr(eq + 1)));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

inline int run_cli(int argc, const char* const* argv, std::istream& in,
                   std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    expand_config(args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  std::vector<const char*> expanded;
  for (const auto& a : args)
    expanded.push_back(a.c_str());

  std::string config_path;
  CLI::App app{"Adaptive dyadic-histogram density estimation for individual sequences"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "print help for every subcommand");

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "estimate a density from decimal samples");
  estimate_cmd->add_option("--config", config_path, "flat key=value defaults; flags override");
  estimate_cmd->add_option("input", est.input, "sample file, '-' for standard input");
  estimate_cmd->add_option("--alpha", est.alpha, "variation budget: const:v | linear:a,b | exp:a,r | table:file")
      ->required();
  estimate_cmd->add_option("--depth", est.depth, "b_n: an integer or 'auto' (floor(log2 n))");
  estimate_cmd->add_option("--format", est.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  estimate_cmd->add_option("--level-cap", est.level_cap, "hard maximum level")
      ->check(CLI::Range(1, max_level));
  estimate_cmd->add_option("--window", est.window, "print audit rows for i <= L only");
  estimate_cmd->add_option("--seed", est.seeds, "accepted and ignored");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "convergence report for a generated sequence");
  simulate_cmd->add_option("--config", config_path, "flat key=value defaults; flags override");
  simulate_cmd->add_option("--source", sim.source,
                           "uniform | normal | exponential | rademacher:k | stratified:k | "
                           "ar1:rho,sigma | circle:width | vdc")
      ->required();
  simulate_cmd->add_option("--n", sim.checkpoints, "checkpoints, comma separated")
      ->required()
      ->delimiter(',');
  simulate_cmd->add_option("--seed", sim.seeds, "seed for stochastic sources");
  simulate_cmd->add_option("--alpha", sim.alpha, "variation budget");
  simulate_cmd->add_option("--depth", sim.depth, "b_n: an integer or 'auto'");
  simulate_cmd->add_option("--format", sim.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  simulate_cmd->add_option("--out", sim.out_path, "output path (default standard output)");
  simulate_cmd->add_option("--level-cap", sim.level_cap, "hard maximum level")
      ->check(CLI::Range(1, max_level));

  AdversaryArgs adv;
  auto* adversary_cmd = app.add_subcommand("adversary", "build a sequence on which a scheme oscillates");
  adversary_cmd->add_option("--config", config_path, "flat key=value defaults; flags override");
  adversary_cmd->add_option("--scheme", adv.scheme, "phi-star:<alpha spec> | fixed-k:<k>")->required();
  adversary_cmd->add_option("--levels", adv.levels, "number of levels K (>= 2)")->required();
  adversary_cmd->add_option("--budget", adv.budget, "values appended per level at most");
  adversary_cmd->add_option("--growth", adv.growth, "candidate length growth factor");
  adversary_cmd->add_option("--sequence-cap", adv.sequence_cap,
                            "omit the sequence from the transcript above this length");
  adversary_cmd->add_option("--out", adv.out_path, "transcript path (default standard output)");

  try {
    app.parse(static_cast<int>(expanded.size()), expanded.data());
    if (estimate_cmd->parsed())
      return cmd_estimate(est, in, out, err);
    if (simulate_cmd->parsed())
      return cmd_simulate(sim, out, err);
    return cmd_adversary(adv, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << "\n";
    return bad_number;
  } catch (const range_error& e) {
    err << "error: " << e.what() << "\n";
    return out_of_range;
  } catch (const contract_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return failure;
  }
}

} // namespace dyadic::cli
