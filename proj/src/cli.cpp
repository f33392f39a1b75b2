#include "swarmix/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "swarmix/errors.hpp"

namespace swarmix::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw InvalidConfig(std::string(key), "cannot parse '" + std::string(text) + "'");
  return value;
}

template <class T>
T parse_unsigned(std::string_view key, std::string_view text) {
  if (!trim(text).empty() && trim(text).front() == '-')
    throw InvalidConfig(std::string(key), "must be non-negative");
  return parse_number<T>(key, text);
}

template <class E>
using NameTable = std::span<const std::pair<std::string_view, E>>;

template <class E>
E parse_enum(std::string_view key, std::string_view text, NameTable<E> names) {
  text = trim(text);
  for (auto [name, value] : names)
    if (name == text) return value;
  std::string allowed;
  for (auto [name, value] : names) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw InvalidConfig(std::string(key), "expected one of " + allowed);
}

constexpr std::array<std::pair<std::string_view, Protocol>, 3> protocol_table{{
    {"swarmix", Protocol::swarmix},
    {"newscast", Protocol::newscast},
    {"anti-entropy", Protocol::anti_entropy}}};
constexpr std::array<std::pair<std::string_view, SimilarityKind>, 2> utility_table{{
    {"weighted", SimilarityKind::significance_weighted}, {"cosine", SimilarityKind::cosine}}};
constexpr std::array<std::pair<std::string_view, ChurnMode>, 2> churn_table{{
    {"failures", ChurnMode::failures}, {"leavings", ChurnMode::leavings}}};
constexpr NameTable<Protocol> protocol_names{protocol_table};
constexpr NameTable<SimilarityKind> utility_names{utility_table};
constexpr NameTable<ChurnMode> churn_names{churn_table};

template <class E>
std::string_view name_of(E value, NameTable<E> names) {
  for (auto [name, v] : names)
    if (v == value) return name;
  return "?";
}

std::string to_upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  std::replace(f.begin(), f.end(), '_', '-');
  return f;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::run: return "run";
    case Command::sweep_churn: return "sweep-churn";
    case Command::baseline: return "baseline";
    case Command::validate_data: return "validate-data";
  }
  return "?";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "data",        "seed",         "trials",     "cycles",
      "cache_size",  "top_n",        "protocol",   "utility",
      "significance_threshold",      "bootstrap_degree",
      "churn_pct",   "churn_mode",   "churn_cycle", "churn_pcts",
      "out"};
  return keys;
}

void apply_setting(RunOptions& o, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "data") o.data = std::string(trim(value));
  else if (k == "seed") o.sim.seed = parse_unsigned<std::uint64_t>(k, value);
  else if (k == "trials") o.trials = parse_unsigned<unsigned>(k, value);
  else if (k == "cycles") o.sim.cycles = parse_unsigned<std::uint32_t>(k, value);
  else if (k == "cache_size") o.sim.protocol.cache_size = parse_unsigned<std::size_t>(k, value);
  else if (k == "top_n") o.sim.top_n = parse_unsigned<std::size_t>(k, value);
  else if (k == "protocol") o.sim.protocol.protocol = parse_enum(k, value, protocol_names);
  else if (k == "utility") o.sim.protocol.utility = parse_enum(k, value, utility_names);
  else if (k == "significance_threshold")
    o.sim.protocol.significance_threshold = parse_unsigned<unsigned>(k, value);
  else if (k == "bootstrap_degree") o.sim.bootstrap_degree = parse_number<double>(k, value);
  else if (k == "churn_pct") o.sim.churn.pct = parse_number<double>(k, value);
  else if (k == "churn_mode") o.churn_mode = parse_enum(k, value, churn_names);
  else if (k == "churn_cycle") o.sim.churn.at_cycle = parse_unsigned<std::uint32_t>(k, value);
  else if (k == "churn_pcts") {
    std::vector<double> pcts;
    std::string_view rest = value;
    while (!trim(rest).empty()) {
      const auto comma = rest.find(',');
      pcts.push_back(parse_number<double>(k, rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (pcts.empty()) throw InvalidConfig(k, "needs at least one percentage");
    o.churn_pcts = std::move(pcts);
  } else if (k == "out") o.out = std::string(trim(value));
  else throw InvalidConfig(k, "unknown key");
}

void apply_config_text(RunOptions& o, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfig(std::string(line), "line " + std::to_string(line_no) + " is not key=value");
    apply_setting(o, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void finalize(RunOptions& o) {
  if (o.trials < 1) throw InvalidConfig("trials", "must be >= 1");
  o.sim.churn.mode = o.sim.churn.pct > 0.0 ? o.churn_mode : ChurnMode::none;
  if (!(o.sim.churn.pct >= 0.0 && o.sim.churn.pct <= 100.0))
    throw InvalidConfig("churn_pct", "must lie in [0, 100]");
  for (double p : o.churn_pcts)
    if (!(p >= 0.0 && p <= 100.0)) throw InvalidConfig("churn_pcts", "must lie in [0, 100]");
  o.sim.validate();
}

std::optional<std::string> system_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

std::optional<Invocation> parse_config(std::span<const std::string> args, const EnvLookup& env) {
  CLI::App app{"Swarmix epidemic overlay simulator"};
  app.set_help_all_flag("--help-all");
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");

  std::map<std::string, std::string> flag_values;
  std::vector<std::pair<std::string, CLI::Option*>> flag_options;
  for (const auto& key : config_keys())
    flag_options.emplace_back(key, app.add_option(flag_name(key), flag_values[key]));

  auto* run = app.add_subcommand("run", "single experiment (default)");
  auto* sweep = app.add_subcommand("sweep-churn", "hit-rate after churn, per percentage");
  auto* baseline = app.add_subcommand("baseline", "centralized recommender only");
  auto* validate = app.add_subcommand("validate-data", "check a rating file");
  for (auto* sub : {run, sweep, baseline, validate}) sub->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InvalidConfig("arguments", e.what());
  }

  Invocation inv;
  if (sweep->parsed()) inv.command = Command::sweep_churn;
  else if (baseline->parsed()) inv.command = Command::baseline;
  else if (validate->parsed()) inv.command = Command::validate_data;

  if (config_path.empty())
    if (auto p = env(std::string(env_prefix) + "CONFIG")) config_path = *p;
  if (!config_path.empty()) apply_config_text(inv.options, read_text(config_path));
  for (const auto& key : config_keys())
    if (auto v = env(std::string(env_prefix) + to_upper(key))) apply_setting(inv.options, key, *v);
  for (const auto& [key, opt] : flag_options)
    if (opt->count() > 0) apply_setting(inv.options, key, flag_values[key]);
  finalize(inv.options);
  return inv;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_config(const RunOptions& o) {
  std::ostringstream s;
  std::string pcts;
  for (double p : o.churn_pcts) pcts += (pcts.empty() ? "" : ",") + format_number(p);
  s << "data = " << o.data << '\n'
    << "seed = " << o.sim.seed << '\n'
    << "trials = " << o.trials << '\n'
    << "cycles = " << o.sim.cycles << '\n'
    << "cache_size = " << o.sim.protocol.cache_size << '\n'
    << "top_n = " << o.sim.top_n << '\n'
    << "protocol = " << name_of(o.sim.protocol.protocol, protocol_names) << '\n'
    << "utility = " << name_of(o.sim.protocol.utility, utility_names) << '\n'
    << "significance_threshold = " << o.sim.protocol.significance_threshold << '\n'
    << "bootstrap_degree = " << format_number(o.sim.bootstrap_degree) << '\n'
    << "churn_pct = " << format_number(o.sim.churn.pct) << '\n'
    << "churn_mode = " << name_of(o.churn_mode, churn_names) << '\n'
    << "churn_cycle = " << o.sim.churn.at_cycle << '\n'
    << "churn_pcts = " << pcts << '\n'
    << "out = " << o.out << '\n';
  return s.str();
}

std::string format_manifest(const RunManifest& m) {
  std::ostringstream s;
  s << "# swarmix " << m.tool_version << " run manifest\n"
    << "# command = " << command_name(m.command) << '\n'
    << "# dataset_sha256 = " << m.dataset_sha256 << '\n'
    << "# master_seed = " << m.options.sim.seed << '\n';
  for (std::size_t t = 0; t < m.trial_seeds.size(); ++t)
    s << "# trial_seed." << t << " = " << m.trial_seeds[t] << '\n';
  s << format_config(m.options);
  return s.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  const std::string data = read_text(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("sha256 failed for " + path.string());
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"trial", "cycle"};
    for (auto [name, member] : metric_fields) c.emplace_back(name);
    c.emplace_back("centralized_avg_similarity");
    c.emplace_back("centralized_hit_rate");
    return c;
  }();
  return cols;
}

namespace {

void write_row(std::ostream& s, const std::string& trial, std::size_t cycle, const CycleMetrics& m,
               double central_sim, double central_hit) {
  s << trial << ',' << cycle;
  for (auto [name, member] : metric_fields) s << ',' << format_number(m.*member);
  s << ',' << format_number(central_sim) << ',' << format_number(central_hit) << '\n';
}

std::string header_line(const std::vector<std::string>& cols) {
  std::string h;
  for (const auto& c : cols) h += (h.empty() ? "" : ",") + c;
  return h + '\n';
}

}  // namespace

std::string metrics_csv(const ExperimentResult& r) {
  std::ostringstream s;
  s << header_line(metrics_columns());
  for (const auto& t : r.trials)
    for (std::size_t c = 0; c < t.series.size(); ++c)
      write_row(s, std::to_string(t.trial), c, t.series[c], t.centralized.avg_similarity,
                t.centralized.hit_rate);
  for (std::size_t c = 0; c < r.mean.size(); ++c)
    write_row(s, "mean", c, r.mean[c], r.centralized_similarity.mean, r.centralized_hit_rate.mean);
  for (std::size_t c = 0; c < r.ci_half_width.size(); ++c)
    write_row(s, "ci95", c, r.ci_half_width[c], r.centralized_similarity.half_width,
              r.centralized_hit_rate.half_width);
  return s.str();
}

std::string churn_csv(std::span<const ChurnRow> rows) {
  std::ostringstream s;
  s << "pct,mode,hit_rate_mean,ci_low,ci_high\n";
  for (const auto& r : rows) {
    for (auto [mode, ci] : {std::pair{"failures", r.failures}, std::pair{"leavings", r.voluntary}}) {
      s << format_number(r.pct) << ',' << mode << ',' << format_number(ci.mean) << ','
        << format_number(ci.low()) << ',' << format_number(ci.high()) << '\n';
    }
  }
  return s.str();
}

std::string baseline_csv(std::span<const BaselineMetrics> trials) {
  std::ostringstream s;
  s << "trial,avg_similarity,hit_rate\n";
  std::vector<double> sim, hit;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    s << t << ',' << format_number(trials[t].avg_similarity) << ','
      << format_number(trials[t].hit_rate) << '\n';
    sim.push_back(trials[t].avg_similarity);
    hit.push_back(trials[t].hit_rate);
  }
  if (trials.size() >= 2) {
    const auto cs = confidence_interval_95(sim);
    const auto ch = confidence_interval_95(hit);
    s << "mean," << format_number(cs.mean) << ',' << format_number(ch.mean) << '\n'
      << "ci95," << format_number(cs.half_width) << ',' << format_number(ch.half_width) << '\n';
  }
  return s.str();
}

void write_file(const std::filesystem::path& out_dir, const std::string& name,
                const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  const auto path = out_dir / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  f.flush();
  if (!f) throw IoError("write failed for " + path.string());
}

int run_command(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const RunOptions& o = inv.options;
  if (o.data.empty()) throw InvalidConfig("data", "a rating file is required");
  const RatingMatrix data = load_ratings(o.data);
  const DatasetInfo info = describe(data);

  if (inv.command == Command::validate_data) {
    out << "users " << info.users << "\nitems " << info.items << "\nratings " << info.ratings
        << "\nmin_ratings_per_user " << info.min_ratings_per_user << "\nsha256 "
        << sha256_file(o.data) << '\n';
    if (info.min_ratings_per_user < 2) {
      err << "some users have fewer than 2 ratings; all-but-1 evaluation is impossible\n";
      return 1;
    }
    return 0;
  }

  RunManifest manifest;
  manifest.command = inv.command;
  manifest.options = o;
  manifest.dataset_sha256 = sha256_file(o.data);
  const unsigned trials = o.trials;
  for (unsigned t = 0; t < trials; ++t) manifest.trial_seeds.push_back(trial_seed(o.sim.seed, t));
  const std::filesystem::path dir = o.out;
  auto progress = [&](const TrialContext& ctx) {
    err << "trial " << ctx.result.trial << " done\n";
  };

  switch (inv.command) {
    case Command::run: {
      const ExperimentResult r = run_experiment(data, o.sim, trials, progress);
      write_file(dir, "metrics.csv", metrics_csv(r));
      const auto& last = r.mean.back();
      out << "cycle " << r.mean.size() - 1 << ": avg_similarity " << format_number(last.avg_similarity)
          << " (centralized " << format_number(r.centralized_similarity.mean) << "), hit_rate "
          << format_number(last.hit_rate) << " (centralized "
          << format_number(r.centralized_hit_rate.mean) << ")\n";
      break;
    }
    case Command::sweep_churn: {
      const auto rows = churn_sweep(data, o.sim, o.churn_pcts, trials, progress);
      write_file(dir, "churn.csv", churn_csv(rows));
      out << churn_csv(rows);
      break;
    }
    case Command::baseline: {
      const auto rows = run_baseline(data, o.sim, trials);
      write_file(dir, "baseline.csv", baseline_csv(rows));
      out << baseline_csv(rows);
      break;
    }
    case Command::validate_data: break;
  }
  write_file(dir, "manifest.txt", format_manifest(manifest));
  err << "wrote " << dir.string() << '\n';
  return 0;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  try {
    const auto inv = parse_config(args);
    if (!inv) return 0;
    return run_command(*inv, std::cout, std::cerr);
  } catch (const InvalidConfig& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace swarmix::cli
