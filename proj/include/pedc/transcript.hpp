#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pedc/protocol.hpp"
#include "pedc/rational.hpp"

namespace pedc {

struct CostAccounting {
  std::uint64_t upload_symbols = 0;    // K * N * L
  std::uint64_t query_symbols = 0;     // N * L * K
  std::uint64_t download_symbols = 0;  // N

  bool operator==(const CostAccounting&) const = default;
};

// A complete recorded run: everything needed to replay both phases,
// re-decode, and account costs offline.
struct Transcript {
  SystemParams params;
  std::uint64_t master_seed = 0;
  std::vector<Message> messages;       // K
  std::vector<UserNoise> user_noises;  // K
  Coefficients f;
  CollectorNoise collector_noise;
  std::vector<ServerStore> stores;  // N
  std::vector<Query> queries;       // N
  std::vector<Answer> answers;      // N
  Statistic statistic;
  CostAccounting cost;
  Rational rate;  // L/N in lowest terms
};

// Canonical JSON: fixed key order, integers only. Identical transcripts
// serialize to identical bytes.
nlohmann::ordered_json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::ordered_json& j);

std::string transcript_to_string(const Transcript& t);
Transcript transcript_from_string(const std::string& text);

// Replays the whole run from the recorded inputs: re-encodes shares,
// re-builds queries, re-answers, re-decodes, re-counts costs, and checks
// the statistic against the direct oracle. Throws Error on any mismatch.
void verify_transcript(const Transcript& t);

}  // namespace pedc
