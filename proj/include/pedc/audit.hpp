#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pedc/protocol.hpp"
#include "pedc/rational.hpp"

namespace pedc {

// Canonical encoding of one observable view: symbol values listed in a
// fixed, documented order. Map keys give order-independent results.
using Outcome = std::vector<std::uint64_t>;

// Exact distribution over a full enumeration: counts, never floats.
class DistributionTable {
 public:
  void add(Outcome outcome) { ++counts_[std::move(outcome)], ++total_; }

  std::uint64_t total() const { return total_; }
  const std::map<Outcome, std::uint64_t>& counts() const { return counts_; }

  Rational probability(const Outcome& outcome) const;

 private:
  std::map<Outcome, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Exact total-variation distance between two tables over enumerations
// of equal size. Zero iff the tables are identical.
Rational statistical_distance(const DistributionTable& a,
                              const DistributionTable& b);

// The three audited constraints:
//   P1  user privacy against E colluding servers (upload phase)
//   P2  user privacy against the data collector, given the statistic
//   P3  collector privacy against any single server (computation phase)
enum class Constraint { kP1, kP2, kP3 };

const char* constraint_id(Constraint c);

struct Witness {
  std::string left;    // the two compared assignments
  std::string right;
  Outcome outcome;     // an observable with differing probability
  Rational p_left;
  Rational p_right;
};

enum class AuditOutcome { kPass, kFail, kRefused };

struct AuditReport {
  Constraint constraint = Constraint::kP1;
  AuditOutcome outcome = AuditOutcome::kRefused;
  Rational max_distance;  // pass iff exactly 0
  std::optional<Witness> witness;
  std::uint64_t enumerated = 0;  // protocol evaluations performed
  std::string detail;            // subset / coefficient pair / reason
};

inline bool passed(const AuditReport& r) {
  return r.outcome == AuditOutcome::kPass;
}

// Degenerate-noise hooks. They exist only to prove the audits have
// power: a zeroed mask must make the corresponding audit fail.
struct NoiseHooks {
  bool zero_user_noise = false;
  bool zero_collector_noise = false;
};

struct AuditBudget {
  std::uint64_t max_evaluations = 100000000;  // refuse above this
};

// P1: for every message assignment, the colluding servers' joint store
// distribution over uniform user noise must be one fixed distribution.
// colluding must list exactly E distinct servers.
AuditReport audit_user_privacy_vs_servers(const SystemParams& params,
                                          const std::vector<std::size_t>& colluding,
                                          const AuditBudget& budget = {},
                                          const NoiseHooks& hooks = {});

// P3: for every fixed (W, Z), the joint distribution of (Q_n, A_n) over
// uniform Z' must be identical under f and f_prime. The pair must be
// linearly independent.
AuditReport audit_collector_privacy_vs_server(const SystemParams& params,
                                              std::size_t server,
                                              const Coefficients& f,
                                              const Coefficients& f_prime,
                                              const AuditBudget& budget = {},
                                              const NoiseHooks& hooks = {});

// P2: group all message assignments by their statistic under f; inside
// each group the collector's view (Z' and all answers) must have one
// distribution over uniform (Z, Z'). Requires f != 0: the guarantee is
// only claimed for coefficients extendable to a basis.
AuditReport audit_user_privacy_vs_collector(const SystemParams& params,
                                            const Coefficients& f,
                                            const AuditBudget& budget = {},
                                            const NoiseHooks& hooks = {});

struct AuditAllOptions {
  std::size_t p2_coefficient_choices = 3;
  std::size_t p3_pairs_per_server = 10;
  bool run_p1 = true;
  bool run_p2 = true;
  bool run_p3 = true;
};

// All E-subsets for P1, a deterministic list of nonzero coefficients
// for P2, and per-server independent pairs for P3. Budget refusals are
// listed as refused reports, never silently skipped.
std::vector<AuditReport> audit_all(const SystemParams& params,
                                   const AuditBudget& budget = {},
                                   const AuditAllOptions& options = {});

nlohmann::ordered_json report_to_json(const AuditReport& report);

}  // namespace pedc
