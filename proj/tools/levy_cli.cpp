// Batch front-end: load a triplet and an experiment config, run the
// simulate / verify / recover pipelines, emit CSV/JSON artifacts with full
// seed provenance. Re-running any command with the same inputs is
// byte-identical.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levy/io.hpp"
#include "levy/jumpmeasure.hpp"
#include "levy/recover.hpp"
#include "levy/serialize.hpp"
#include "levy/simulate.hpp"
#include "levy/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace levy;

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInconclusive = 2;
constexpr int kUsage = 64;
constexpr int kInvalidData = 65;
constexpr const char* kVersion = "1.0.0";

const std::vector<std::string> kBattery = {
    "ecf",        "poisson",           "jump_moments", "disjoint_independence",
    "martingale", "covariance_identity", "gaussian_residual", "strong_markov"};
const std::vector<std::string> kControls = {
    "neg_poisson_rate", "neg_independence_same_region",
    "neg_covariance_uncompensated"};

struct Experiment {
  std::string triplet_path;  // one of triplet_path / psi_table must be set
  std::string psi_table;
  SimConfig sim;
  std::size_t replicates = 10000;
  std::uint64_t seed = 1;
  std::vector<std::string> checks;  // empty selects the default battery
  bool terminal_only = false;
};

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw std::invalid_argument("config: '" + field + "' must be a number");
  return v.get<double>();
}

Experiment parse_experiment(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected an object");
  static const std::set<std::string> known = {
      "schema", "triplet", "psi_table", "horizon", "dt",   "eps",          "k_max",
      "mode",   "replicates", "seed",   "checks",  "terminal_only"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw std::invalid_argument("config: unknown field '" + k + "'");
  if (!j.contains("schema") || j.at("schema") != "levy-experiment/1")
    throw std::invalid_argument("config: schema must be \"levy-experiment/1\"");

  Experiment e;
  if (j.contains("triplet")) {
    if (!j.at("triplet").is_string())
      throw std::invalid_argument("config: 'triplet' must be a path string");
    e.triplet_path = j.at("triplet").get<std::string>();
  }
  if (j.contains("psi_table")) {
    if (!j.at("psi_table").is_string())
      throw std::invalid_argument("config: 'psi_table' must be a path string");
    e.psi_table = j.at("psi_table").get<std::string>();
  }
  if (j.contains("horizon")) e.sim.horizon = as_number(j.at("horizon"), "horizon");
  if (j.contains("dt")) e.sim.dt = as_number(j.at("dt"), "dt");
  if (j.contains("eps")) e.sim.eps = as_number(j.at("eps"), "eps");
  if (j.contains("k_max"))
    e.sim.k_max = static_cast<int>(as_number(j.at("k_max"), "k_max"));
  if (j.contains("mode")) {
    const auto m = j.at("mode");
    if (m == "shell_series")
      e.sim.mode = SmallJumpMode::shell_series;
    else if (m == "rejection_direct")
      e.sim.mode = SmallJumpMode::rejection_direct;
    else
      throw std::invalid_argument(
          "config: 'mode' must be \"shell_series\" or \"rejection_direct\"");
  }
  if (j.contains("replicates")) {
    if (!j.at("replicates").is_number_unsigned() || j.at("replicates").get<std::uint64_t>() == 0)
      throw std::invalid_argument("config: 'replicates' must be a positive integer");
    e.replicates = j.at("replicates").get<std::size_t>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      throw std::invalid_argument("config: 'seed' must be an unsigned integer");
    e.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("checks")) {
    if (!j.at("checks").is_array())
      throw std::invalid_argument("config: 'checks' must be an array of names");
    for (const auto& c : j.at("checks")) {
      if (!c.is_string())
        throw std::invalid_argument("config: 'checks' must be an array of names");
      e.checks.push_back(c.get<std::string>());
    }
  }
  if (j.contains("terminal_only")) {
    if (!j.at("terminal_only").is_boolean())
      throw std::invalid_argument("config: 'terminal_only' must be a boolean");
    e.terminal_only = j.at("terminal_only").get<bool>();
  }
  return e;
}

std::string resolve(const std::string& base_file, const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_file).parent_path() / p).string();
}

LevyTriplet load_triplet(const std::string& path) {
  const LevyTriplet t = triplet_from_string(read_file(path));
  const auto report = validate_triplet(t);
  if (!report.ok())
    throw std::invalid_argument("triplet '" + path + "': " + report.str());
  return t;
}

// characteristic exponent tabulated as u,re,im rows, linearly interpolated
CharExponent psi_from_table(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<double> us, re, im;
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    double v[3];
    std::size_t field_start = 0;
    bool ok = true;
    for (int f = 0; f < 3; ++f) {
      std::size_t comma = line.find(',', field_start);
      if (comma == std::string::npos) comma = line.size();
      if ((comma == line.size()) != (f == 2)) ok = false;
      try {
        v[f] = std::stod(line.substr(field_start, comma - field_start));
      } catch (...) {
        ok = false;
      }
      field_start = comma + 1;
      if (!ok) break;
    }
    if (!ok) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw std::invalid_argument("psi table '" + path + "': malformed row '" + line + "'");
    }
    first = false;
    us.push_back(v[0]);
    re.push_back(v[1]);
    im.push_back(v[2]);
  }
  if (us.size() < 2)
    throw std::invalid_argument("psi table '" + path + "': need at least two rows");
  for (std::size_t i = 1; i < us.size(); ++i)
    if (us[i] <= us[i - 1])
      throw std::invalid_argument("psi table '" + path + "': u must be strictly increasing");
  auto fn = [us, re, im](const Vec& u) -> cd {
    const double x = u[0];
    if (x < us.front() || x > us.back())
      throw std::domain_error("psi table does not cover the requested point");
    const auto it = std::lower_bound(us.begin(), us.end(), x);
    if (it == us.begin()) return {re.front(), im.front()};
    const std::size_t i = static_cast<std::size_t>(it - us.begin());
    const double w = (x - us[i - 1]) / (us[i] - us[i - 1]);
    return {re[i - 1] + w * (re[i] - re[i - 1]), im[i - 1] + w * (im[i] - im[i - 1])};
  };
  return CharExponent::analytic_fn(1, fn);
}

void write_metadata(const fs::path& out_dir, const std::string& command,
                    const Experiment& e, const std::string& config_text,
                    const std::string& input_text, std::vector<std::string> outputs) {
  std::sort(outputs.begin(), outputs.end());
  json m;
  m["schema"] = "levy-run/1";
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = e.seed;
  m["replicates"] = e.replicates;
  m["config_hash"] = hex64(fnv1a64(config_text));
  m["input_hash"] = hex64(fnv1a64(input_text));
  m["outputs"] = outputs;
  atomic_write_file((out_dir / "metadata.json").string(), m.dump(2) + "\n");
}

// ----------------------------- simulate -------------------------------------

int cmd_simulate(const Experiment& e, const LevyTriplet& t, const fs::path& out,
                 const std::string& config_text, const std::string& triplet_text) {
  std::vector<std::string> outputs;
  if (e.terminal_only) {
    const int dim = t.dim();
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(dim),
                                          std::vector<double>(e.replicates));
    sample_replicates(t, e.sim, e.seed, e.replicates,
                      [&](std::size_t r, const PathSample& p) {
                        for (int d = 0; d < dim; ++d)
                          cols[static_cast<std::size_t>(d)][r] = p.skeleton.back()[d];
                      });
    std::vector<std::string> headers = {"value", "value2", "value3"};
    headers.resize(static_cast<std::size_t>(dim));
    atomic_write_file((out / "terminal.csv").string(), table_csv(headers, cols));
    outputs.push_back("terminal.csv");
  } else {
    for (std::size_t r = 0; r < e.replicates; ++r) {
      const PathSample p = sample_levy_path(t, e.sim, e.seed, r);
      const std::string ps = "path_" + std::to_string(r) + ".csv";
      const std::string js = "jumps_" + std::to_string(r) + ".csv";
      atomic_write_file((out / ps).string(), skeleton_csv(p));
      atomic_write_file((out / js).string(), jumps_csv(p));
      outputs.push_back(ps);
      outputs.push_back(js);
    }
  }
  write_metadata(out, "simulate", e, config_text, triplet_text, outputs);
  std::cout << "simulate: wrote " << outputs.size() << " files to " << out.string()
            << "\n";
  return kPass;
}

// ------------------------------ verify --------------------------------------

std::uint64_t check_seed(std::uint64_t master, const std::string& name) {
  return mix64(master ^ fnv1a64(name));
}

CheckReport run_one_check(const std::string& name, const LevyTriplet& t,
                          const SimConfig& sim, std::size_t n, std::uint64_t master) {
  const std::uint64_t seed = check_seed(master, name);
  const auto big = BorelRegion::abs_ge(1.0);
  const double horizon = sim.horizon;
  if (name == "ecf") {
    std::vector<Vec> us;
    for (double u : linspace(-5.0, 5.0, 21)) us.push_back(Vec(u));
    return check_ecf(t, sim, seed, n, horizon, us);
  }
  if (name == "poisson") return check_poisson_law(t, sim, seed, n, big);
  if (name == "jump_moments")
    return check_jump_moments(t, sim, seed, n, [](const Vec& x) { return x[0]; }, big);
  if (name == "disjoint_independence") {
    const auto grid = linspace(-2.0, 2.0, 5);
    return check_disjoint_independence(t, sim, seed, n, BorelRegion::ray_ge(1.0),
                                       BorelRegion::ray_le(-1.0), grid, grid);
  }
  if (name == "martingale") {
    const double s = sim.dt * std::max(1.0, std::round(horizon / 2.0 / sim.dt));
    return check_martingale_normalization(t, sim, seed, n, 1.0, s, horizon);
  }
  if (name == "covariance_identity")
    return check_jump_covariance_identity(t, sim, seed, n, big, big, horizon);
  if (name == "gaussian_residual")
    return check_gaussian_residual(t, sim, seed, n, horizon, linspace(-3.0, 3.0, 7));
  if (name == "strong_markov") {
    SimConfig cfg = sim;
    const double s = cfg.dt * std::max(1.0, std::round(horizon / 20.0 / cfg.dt));
    const double rate = nu_mass(t.measure, big);
    if (rate > 0.0) {
      const double need = 10.0 * (s + 1.0 / rate);
      if (cfg.horizon < need) cfg.horizon = std::ceil(need / cfg.dt) * cfg.dt;
    }
    return check_strong_markov(t, cfg, seed, n, big, s, linspace(-2.0, 2.0, 5));
  }
  if (name == "neg_poisson_rate") {
    // control: testing against a deliberately wrong rate must fail
    std::vector<std::uint64_t> counts(n, 0);
    sample_replicates(t, sim, seed, n, [&](std::size_t r, const PathSample& p) {
      counts[r] = count_jumps(p, big, p.horizon);
    });
    const double lambda = horizon * nu_mass(t.measure, big);
    CheckReport rep = check_poisson_law(counts, 1.25 * lambda + 0.5, seed);
    rep.check = "neg_poisson_rate";
    rep.note = "control: expected to fail";
    return rep;
  }
  if (name == "neg_independence_same_region") {
    // control: the factorization statistic on identical regions must blow up
    const auto grid = linspace(-2.0, 2.0, 5);
    const double sup = detail::factorization_sup(t, sim, seed, n,
                                                 BorelRegion::ray_ge(1.0),
                                                 BorelRegion::ray_ge(1.0), grid, grid);
    CheckReport rep;
    rep.check = "neg_independence_same_region";
    rep.n = n;
    rep.seed = seed;
    rep.note = "control: expected to fail";
    const double band = clt_band(2.0, n);
    rep.items.push_back({"factorization_sup", sup, 0.0, band, sup <= band});
    rep.status = sup <= band ? CheckStatus::pass : CheckStatus::fail;
    return rep;
  }
  if (name == "neg_covariance_uncompensated") {
    // control: dropping the compensator must break the covariance identity
    const auto b = BorelRegion::ray_ge(1.0);
    const auto st =
        detail::covariance_identity_stats(t, sim, seed, n, b, b, horizon, false);
    CheckReport rep;
    rep.check = "neg_covariance_uncompensated";
    rep.n = n;
    rep.seed = seed;
    rep.note = "control: expected to fail";
    rep.items.push_back({"product_mean", st.lhs, st.expected, st.lhs_band,
                         std::abs(st.lhs - st.expected) <= st.lhs_band});
    rep.status = rep.items[0].pass ? CheckStatus::pass : CheckStatus::fail;
    return rep;
  }
  throw std::logic_error("unreachable: unregistered check " + name);
}

int cmd_verify(const Experiment& e, const LevyTriplet& t, const fs::path& out,
               const std::string& config_text, const std::string& triplet_text) {
  std::vector<std::string> selected = e.checks.empty() ? kBattery : e.checks;
  std::vector<CheckReport> reports;
  for (const std::string& name : selected) {
    CheckReport rep;
    try {
      rep = run_one_check(name, t, e.sim, e.replicates, e.seed);
      rep.check = name;  // report under the name the user selects with --checks
    } catch (const std::exception& ex) {
      rep.check = name;
      rep.status = CheckStatus::fail;
      rep.seed = check_seed(e.seed, name);
      rep.note = std::string("error: ") + ex.what();
    }
    reports.push_back(rep);
  }
  const json doc = reports_to_json(reports);
  atomic_write_file((out / "report.json").string(), doc.dump(2) + "\n");
  write_metadata(out, "verify", e, config_text, triplet_text, {"report.json"});

  bool any_fail = false, any_inconclusive = false;
  for (const CheckReport& r : reports) {
    const char* status = r.status == CheckStatus::pass
                             ? "pass"
                             : (r.status == CheckStatus::fail ? "fail" : "inconclusive");
    std::cout << r.check << ": " << status;
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
    any_fail = any_fail || r.status == CheckStatus::fail;
    any_inconclusive = any_inconclusive || r.status == CheckStatus::inconclusive;
  }
  if (any_fail) return kCheckFailure;
  if (any_inconclusive) return kInconclusive;
  return kPass;
}

// ------------------------------ recover -------------------------------------

int cmd_recover(const Experiment& e, const std::optional<LevyTriplet>& truth,
                const CharExponent& psi, const fs::path& out,
                const std::string& config_text, const std::string& input_text) {
  const RecoveryConfig rcfg;
  const RecoveredTriplet rec = recover_triplet(psi, rcfg);

  json doc;
  doc["schema"] = "levy-recovered/1";
  doc["sigma2"] = {{"value", rec.diffusion.sigma2},
                   {"error_estimate", rec.diffusion.error},
                   {"converged", rec.diffusion.converged}};
  doc["drift"] = {{"a", rec.drift.a},
                  {"cross_check_gap", rec.drift.cross_check_gap},
                  {"flagged", rec.drift.flagged}};
  json atoms = json::array();
  for (const RecoveredAtom& a : rec.measure.atoms)
    atoms.push_back({{"x", a.x},
                     {"rho_mass", a.rho_mass},
                     {"nu_mass", a.nu_mass},
                     {"denominator", a.denom},
                     {"ill_conditioned", a.ill_conditioned}});
  doc["atoms"] = atoms;
  doc["flags"] = {{"negative_fraction", rec.measure.negative_fraction},
                  {"inconsistent_input", rec.measure.inconsistent_input},
                  {"floor_active", rec.measure.floor_active}};

  int exit_code = kPass;
  if (truth) {
    const CheckReport rt = roundtrip_report(*truth, rcfg);
    doc["roundtrip"] = report_to_json(rt);
    if (rt.status == CheckStatus::fail) exit_code = kCheckFailure;
  }

  atomic_write_file((out / "recovered.json").string(), doc.dump(2) + "\n");
  atomic_write_file((out / "measure.csv").string(), measure_csv(rec.measure));
  write_metadata(out, "recover", e, config_text, input_text,
                 {"recovered.json", "measure.csv"});

  std::cout << "sigma2: " << format_double(rec.diffusion.sigma2)
            << (rec.diffusion.converged ? "" : " (not converged)") << "\n";
  std::cout << "drift: " << format_double(rec.drift.a)
            << (rec.drift.flagged ? " (cross-check flagged)" : "") << "\n";
  for (const RecoveredAtom& a : rec.measure.atoms)
    std::cout << "atom: x=" << format_double(a.x) << " mass=" << format_double(a.nu_mass)
              << (a.ill_conditioned ? " (ill-conditioned)" : "") << "\n";
  if (rec.measure.floor_active) std::cout << "warning: denominator floor active\n";
  if (rec.measure.inconsistent_input)
    std::cout << "warning: inconsistent input (negative mass)\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy process toolkit: simulate paths, verify distributional laws, "
               "recover triplets from characteristic exponents"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed_flag = 0;
  std::size_t replicates_flag = 0;
  std::string checks_flag;

  const std::pair<const char*, const char*> kCommands[] = {
      {"simulate", "write path/jump CSV files (or a terminal-value aggregate)"},
      {"verify", "run the statistical check battery"},
      {"recover", "recover a triplet from a characteristic exponent"}};
  for (const auto& [name, desc] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "experiment config (levy-experiment/1)")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default .)");
    sub->add_option("--seed", seed_flag, "override the master seed");
    sub->add_option("--replicates", replicates_flag, "override the replicate count");
    if (std::string(name) == "verify")
      sub->add_option("--checks", checks_flag, "comma-separated check names");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex);
    return rc == 0 ? kPass : kUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const CLI::Option* seed_opt = sub->get_option("--seed");
  const CLI::Option* reps_opt = sub->get_option("--replicates");

  try {
    const std::string config_text = read_file(config_path);
    json cfg_json;
    try {
      cfg_json = json::parse(config_text);
    } catch (const json::parse_error& pe) {
      throw std::invalid_argument(std::string("config: ") + pe.what());
    }
    Experiment e = parse_experiment(cfg_json);
    if (seed_opt->count() > 0) e.seed = seed_flag;
    if (reps_opt->count() > 0) {
      if (replicates_flag == 0)
        throw std::invalid_argument("config: 'replicates' must be a positive integer");
      e.replicates = replicates_flag;
    }
    if (!checks_flag.empty()) {
      e.checks.clear();
      std::size_t pos = 0;
      while (pos <= checks_flag.size()) {
        std::size_t comma = checks_flag.find(',', pos);
        if (comma == std::string::npos) comma = checks_flag.size();
        if (comma > pos) e.checks.push_back(checks_flag.substr(pos, comma - pos));
        pos = comma + 1;
      }
    }
    for (const std::string& c : e.checks) {
      const bool known =
          std::find(kBattery.begin(), kBattery.end(), c) != kBattery.end() ||
          std::find(kControls.begin(), kControls.end(), c) != kControls.end();
      if (!known) {
        std::cerr << "unknown check '" << c << "'\nregistered checks:";
        for (const auto& k : kBattery) std::cerr << " " << k;
        for (const auto& k : kControls) std::cerr << " " << k;
        std::cerr << "\n";
        return kUsage;
      }
    }

    const fs::path out(out_dir);
    fs::create_directories(out);

    if (command == "simulate" || command == "verify") {
      if (e.triplet_path.empty())
        throw std::invalid_argument("config: 'triplet' is required for " + command);
      const std::string tpath = resolve(config_path, e.triplet_path);
      const std::string ttext = read_file(tpath);
      const LevyTriplet t = load_triplet(tpath);
      return command == "simulate" ? cmd_simulate(e, t, out, config_text, ttext)
                                   : cmd_verify(e, t, out, config_text, ttext);
    }

    // recover
    if (!e.psi_table.empty()) {
      const std::string ppath = resolve(config_path, e.psi_table);
      const std::string ptext = read_file(ppath);
      CharExponent psi = [&] {
        try {
          return psi_from_table(ppath);
        } catch (const ValidationError& ve) {
          throw std::invalid_argument(std::string("invalid exponent: ") + ve.what());
        }
      }();
      return cmd_recover(e, std::nullopt, psi, out, config_text, ptext);
    }
    if (e.triplet_path.empty())
      throw std::invalid_argument("config: recover needs 'triplet' or 'psi_table'");
    const std::string tpath = resolve(config_path, e.triplet_path);
    const std::string ttext = read_file(tpath);
    const LevyTriplet t = load_triplet(tpath);
    if (t.dim() != 1) {
      std::cerr << "recover: input must be one-dimensional\n";
      return kUsage;
    }
    const CharExponent psi = CharExponent::from_triplet(t);
    return cmd_recover(e, t, psi, out, config_text, ttext);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kInvalidData;
  }
}
