#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pedc/linalg.hpp"

namespace pedc {

// Validated configuration shared by all parties; the single source of
// truth for a run. Party indices are 1-based throughout the library:
// users k in [1:K], servers n in [1:N], symbol positions l in [1:L].
struct SystemParams {
  std::uint64_t q = 0;          // prime field order
  std::size_t num_users = 0;    // K
  std::size_t num_servers = 0;  // N
  std::size_t collusion = 0;    // E, servers that may pool shares
  std::size_t message_len = 0;  // L = N - E - 1
  // N distinct evaluation points with alpha + i != 0 for all i in [1:L];
  // globally known to users, servers and the collector.
  std::vector<FieldElement> alphas;
};

// Default alpha policy: the N smallest field values whose shifts by
// 1..L are all nonzero. Deterministic so transcripts reproduce.
SystemParams make_params(std::uint64_t q, std::size_t num_users,
                         std::size_t num_servers, std::size_t collusion);

// Same validation with caller-chosen evaluation points.
SystemParams make_params(std::uint64_t q, std::size_t num_users,
                         std::size_t num_servers, std::size_t collusion,
                         const std::vector<std::uint64_t>& alphas);

// Delta_n = prod_{i=1..L} (i + alpha_n); nonzero for valid params.
FieldElement delta(const SystemParams& params, std::size_t server);

// N x N reconstruction system: row n is
//   [1/(1+a_n), ..., 1/(L+a_n), 1, a_n, ..., a_n^E].
// Invertible whenever the alpha_n are distinct and all shifts are nonzero.
FieldMatrix build_decoding_matrix(const SystemParams& params);

}  // namespace pedc
