#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pedc/transcript.hpp"

namespace pedc {

// Optional fixed inputs for reproduction; anything left empty is drawn
// from the master seed.
struct RunOptions {
  std::optional<std::vector<Message>> messages;
  std::optional<Coefficients> f;
  std::optional<std::vector<UserNoise>> user_noises;
  std::optional<CollectorNoise> collector_noise;
};

// Runs the upload phase then the computation phase with users, servers
// and the collector as in-process parties exchanging typed mail.
// Deterministic: identical (params, seed, fixed inputs) give an
// identical Transcript regardless of party scheduling.
Transcript run_protocol(const SystemParams& params, std::uint64_t seed,
                        const RunOptions& options = {});

// What each role legitimately observes; nothing else is reachable
// through these views.
struct UserView {
  std::size_t user;
  Message message;
  UserNoise noise;
  std::vector<ShareRow> uploads;
};

struct ServerView {
  std::size_t server;
  ServerStore store;
  Query query;
  Answer answer;
};

struct CollectorView {
  Coefficients f;
  CollectorNoise noise;
  std::vector<Query> queries;
  std::vector<Answer> answers;
  Statistic statistic;
};

using PartyView = std::variant<UserView, ServerView, CollectorView>;

struct Role {
  enum class Kind { kUser, kServer, kCollector };
  Kind kind = Kind::kCollector;
  std::size_t index = 0;  // user k or server n; unused for the collector
};

PartyView extract_view(const Transcript& t, Role role);

nlohmann::ordered_json view_to_json(const PartyView& view);

// One sweep row per requested configuration.
struct GridPoint {
  std::uint64_t q = 0;  // 0 = auto: smallest prime >= N+L
  std::size_t num_users = 2;
  std::size_t num_servers = 0;
  std::size_t collusion = 0;
};

struct RateRow {
  std::uint64_t q = 0;
  std::size_t num_users = 0;
  std::size_t num_servers = 0;
  std::size_t collusion = 0;
  std::size_t message_len = 0;  // 0 when infeasible
  bool feasible = false;
  Rational measured_rate;  // symbols decoded per symbol downloaded; 0/1 if infeasible
  Rational capacity;       // (N-E-1)/N, or 0/1 in the zero branch
  bool match = false;      // measured == capacity (feasible rows)
  std::string reason;      // set when infeasible
};

// Runs one protocol instance per feasible config and measures its rate;
// infeasible configs become rate-0 rows with the rejection reason.
std::vector<RateRow> sweep_rates(const std::vector<GridPoint>& grid,
                                 std::uint64_t seed);

}  // namespace pedc
