// pedc: run, audit, sweep and inspect privacy-preserving data-collection
// protocol instances over GF(q).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pedc/audit.hpp"
#include "pedc/sim.hpp"

namespace {

using pedc::Rational;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // bad flags, unreadable files, bad JSON
constexpr int kExitInfeasible = 2;  // configuration rejected by validation
constexpr int kExitAuditFail = 3;   // an audit did not pass
constexpr int kExitInternal = 4;    // invariant violation (protocol bug)

struct Config {
  pedc::SystemParams params;
  std::uint64_t seed = 0;
  pedc::RunOptions fixed;  // only W and f can be fixed from a config
  std::string out;
};

Config load_config(const std::string& path,
                   const std::optional<std::uint64_t>& seed_override,
                   const std::string& out_override) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config: " + path);
  ordered_json j;
  in >> j;

  const auto q = j.at("q").get<std::uint64_t>();
  const auto k = j.at("K").get<std::size_t>();
  const auto n = j.at("N").get<std::size_t>();
  const auto e = j.at("E").get<std::size_t>();

  Config config;
  if (j.contains("alphas")) {
    config.params = pedc::make_params(
        q, k, n, e, j.at("alphas").get<std::vector<std::uint64_t>>());
  } else {
    config.params = pedc::make_params(q, k, n, e);
  }

  if (seed_override) {
    config.seed = *seed_override;
  } else if (j.contains("seed")) {
    config.seed = j.at("seed").get<std::uint64_t>();
  } else {
    throw std::ios_base::failure(
        "config must carry a seed (wall-clock defaults are not allowed)");
  }

  if (j.contains("W")) {
    std::vector<pedc::Message> messages;
    std::size_t user = 1;
    for (const auto& row : j.at("W")) {
      messages.push_back(pedc::Message{
          user++, pedc::FieldVector::from_values(
                      row.get<std::vector<std::uint64_t>>(), q)});
    }
    config.fixed.messages = std::move(messages);
  }
  if (j.contains("f")) {
    config.fixed.f = pedc::FieldVector::from_values(
        j.at("f").get<std::vector<std::uint64_t>>(), q);
  }

  config.out = !out_override.empty()
                   ? out_override
                   : j.value("out", std::string("transcript.json"));
  return config;
}

std::string format_rational(const Rational& r) { return r.str(); }

std::string format_statistic(const pedc::Statistic& statistic) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < statistic.size(); ++i) {
    if (i > 0) out << ",";
    out << statistic[i].value();
  }
  out << "]";
  return out.str();
}

pedc::AuditBudget budget_from_env() {
  pedc::AuditBudget budget;
  if (const char* env = std::getenv("PEDC_BUDGET")) {
    budget.max_evaluations = std::strtoull(env, nullptr, 10);
  }
  return budget;
}

int cmd_run(const Config& config) {
  const pedc::Transcript t =
      pedc::run_protocol(config.params, config.seed, config.fixed);

  if (t.statistic != pedc::compute_statistic_oracle(t.messages, t.f)) {
    std::cerr << "internal error: decoded statistic disagrees with the "
                 "direct oracle\n";
    return kExitInternal;
  }

  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + config.out);
  out << pedc::transcript_to_string(t);

  std::cout << "statistic=" << format_statistic(t.statistic)
            << " download_symbols=" << t.cost.download_symbols
            << " rate=" << format_rational(t.rate) << "\n";
  std::cout << "transcript written to " << config.out << "\n";
  return kExitOk;
}

int cmd_audit(const Config& config, const std::string& constraint) {
  pedc::AuditAllOptions options;
  options.run_p1 = constraint == "all" || constraint == "P1";
  options.run_p2 = constraint == "all" || constraint == "P2";
  options.run_p3 = constraint == "all" || constraint == "P3";

  const auto reports =
      pedc::audit_all(config.params, budget_from_env(), options);

  ordered_json arr = ordered_json::array();
  bool all_pass = !reports.empty();
  for (const auto& report : reports) {
    arr.push_back(pedc::report_to_json(report));
    const auto j = pedc::report_to_json(report);
    std::cout << j["constraint"].get<std::string>() << " "
              << report.detail << ": " << j["outcome"].get<std::string>()
              << " (distance " << report.max_distance.str() << ", "
              << report.enumerated << " evaluations)\n";
    all_pass = all_pass && pedc::passed(report);
  }
  if (!config.out.empty()) {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + config.out);
    out << arr.dump(2) << "\n";
  }
  std::cout << (all_pass ? "all audits passed" : "AUDIT FAILURE") << "\n";
  return all_pass ? kExitOk : kExitAuditFail;
}

// Grid strings look like "N=3..6,E=1..4" with optional "q=13" and "K=2".
std::vector<pedc::GridPoint> parse_grid(const std::string& text) {
  std::uint64_t q = 0;  // auto
  std::size_t num_users = 2;
  std::optional<std::pair<std::size_t, std::size_t>> n_range, e_range;

  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw std::ios_base::failure("grid term without '=': " + part);
    }
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    const auto dots = value.find("..");
    std::size_t lo, hi;
    if (dots == std::string::npos) {
      lo = hi = std::stoull(value);
    } else {
      lo = std::stoull(value.substr(0, dots));
      hi = std::stoull(value.substr(dots + 2));
    }
    if (lo > hi) throw std::ios_base::failure("grid range is empty: " + part);
    if (key == "N") {
      n_range = {lo, hi};
    } else if (key == "E") {
      e_range = {lo, hi};
    } else if (key == "q") {
      q = lo;
      if (lo != hi) throw std::ios_base::failure("q must be a single value");
    } else if (key == "K") {
      num_users = lo;
      if (lo != hi) throw std::ios_base::failure("K must be a single value");
    } else {
      throw std::ios_base::failure("unknown grid key: " + key);
    }
  }
  if (!n_range || !e_range) {
    throw std::ios_base::failure("grid needs both N and E, e.g. N=3..6,E=1..4");
  }

  std::vector<pedc::GridPoint> grid;
  for (std::size_t n = n_range->first; n <= n_range->second; ++n) {
    for (std::size_t e = e_range->first; e <= e_range->second; ++e) {
      grid.push_back({q, num_users, n, e});
    }
  }
  return grid;
}

int cmd_rate(const std::string& grid_text, std::uint64_t seed) {
  const auto rows = pedc::sweep_rates(parse_grid(grid_text), seed);

  std::cout << "N\tE\tL\trate\tcapacity\tmatch\n";
  bool all_match = true;
  for (const auto& row : rows) {
    if (row.feasible) {
      std::cout << row.num_servers << "\t" << row.collusion << "\t"
                << row.message_len << "\t" << row.measured_rate.str() << "\t"
                << row.capacity.str() << "\t"
                << (row.match ? "true" : "false") << "\n";
      all_match = all_match && row.match;
    } else {
      std::cout << row.num_servers << "\t" << row.collusion << "\t-\t0\t"
                << row.capacity.str() << "\t-\t(" << row.reason << ")\n";
    }
  }
  if (!all_match) {
    std::cerr << "internal error: a feasible row missed its capacity\n";
    return kExitInternal;
  }
  return kExitOk;
}

int cmd_inspect(const std::string& transcript_path, const std::string& role_text) {
  std::ifstream in(transcript_path);
  if (!in) {
    throw std::ios_base::failure("cannot open transcript: " + transcript_path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const pedc::Transcript t = pedc::transcript_from_string(buffer.str());

  pedc::Role role;
  if (role_text == "collector") {
    role = {pedc::Role::Kind::kCollector, 0};
  } else if (role_text.rfind("user:", 0) == 0) {
    role = {pedc::Role::Kind::kUser, std::stoull(role_text.substr(5))};
  } else if (role_text.rfind("server:", 0) == 0) {
    role = {pedc::Role::Kind::kServer, std::stoull(role_text.substr(7))};
  } else {
    throw std::ios_base::failure(
        "role must be user:<k>, server:<n> or collector");
  }

  std::cout << pedc::view_to_json(pedc::extract_view(t, role)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secure data collection over GF(q): K users secret-share messages to "
      "N servers; a collector retrieves one private linear combination."};
  app.require_subcommand(1);

  std::string config_path, out_path, constraint = "all", grid, role,
              transcript_path;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t rate_seed = 0;

  auto* run = app.add_subcommand("run", "run both phases, write a transcript");
  run->add_option("--config", config_path, "config JSON")->required();
  run->add_option("--seed", seed_flag, "override the config seed");
  run->add_option("--out", out_path, "transcript output path");

  auto* audit = app.add_subcommand("audit", "enumerate the privacy audits");
  audit->add_option("--config", config_path, "config JSON")->required();
  audit->add_option("--constraint", constraint, "P1, P2, P3 or all")
      ->check(CLI::IsMember({"P1", "P2", "P3", "all"}));
  audit->add_option("--out", out_path, "audit report output path");

  auto* rate = app.add_subcommand("rate", "sweep configurations and rates");
  rate->add_option("--grid", grid, "e.g. \"N=3..6,E=1..4\"")->required();
  rate->add_option("--seed", rate_seed, "sweep seed (default 0)");

  auto* inspect =
      app.add_subcommand("inspect", "print one party's view of a transcript");
  inspect->add_option("transcript", transcript_path, "transcript JSON")
      ->required();
  inspect->add_option("--role", role, "user:<k>, server:<n> or collector")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      return cmd_run(load_config(config_path, seed_flag, out_path));
    }
    if (audit->parsed()) {
      Config config = load_config(config_path, std::uint64_t{0}, out_path);
      config.out = out_path;  // audit writes only when --out was given
      return cmd_audit(config, constraint);
    }
    if (rate->parsed()) {
      return cmd_rate(grid, rate_seed);
    }
    if (inspect->parsed()) {
      return cmd_inspect(transcript_path, role);
    }
  } catch (const pedc::InfeasibleConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const pedc::FieldTooSmallError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const pedc::NotPrimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pedc::DimensionError& e) {
    // Shape mistakes in configs and transcripts are usage errors.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad JSON: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
