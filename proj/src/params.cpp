#include "pedc/params.hpp"

#include <set>
#include <string>

namespace pedc {

namespace {

void validate_counts(std::uint64_t q, std::size_t num_users,
                     std::size_t num_servers, std::size_t collusion) {
  if (num_users < 1) throw DimensionError("need at least one user");
  if (num_servers < 2) throw DimensionError("need at least two servers");
  if (collusion + 1 >= num_servers) {
    throw InfeasibleConfigError(
        "infeasible configuration: E=" + std::to_string(collusion) +
        " >= N-1=" + std::to_string(num_servers - 1) +
        "; correctness and user privacy cannot coexist with positive rate");
  }
  if (!is_prime(q)) {
    throw NotPrimeError("q=" + std::to_string(q) + " is not prime");
  }
  if (q >= (1ull << 62)) {
    throw Error("q must fit comfortably in a machine word (q < 2^62)");
  }
  const std::size_t message_len = num_servers - collusion - 1;
  if (q < num_servers + message_len) {
    throw FieldTooSmallError(
        "field too small: q=" + std::to_string(q) + " < N+L=" +
        std::to_string(num_servers + message_len) +
        " leaves fewer than N valid evaluation points");
  }
}

bool shifts_nonzero(std::uint64_t alpha, std::uint64_t q,
                    std::size_t message_len) {
  // alpha + i = 0 in GF(q) exactly when alpha = q - i, i in [1:L].
  for (std::size_t i = 1; i <= message_len; ++i) {
    if ((alpha + i) % q == 0) return false;
  }
  return true;
}

}  // namespace

SystemParams make_params(std::uint64_t q, std::size_t num_users,
                         std::size_t num_servers, std::size_t collusion) {
  validate_counts(q, num_users, num_servers, collusion);
  const std::size_t message_len = num_servers - collusion - 1;

  std::vector<std::uint64_t> alphas;
  for (std::uint64_t a = 0; a < q && alphas.size() < num_servers; ++a) {
    if (shifts_nonzero(a, q, message_len)) alphas.push_back(a);
  }
  // validate_counts guarantees q - L >= N candidates exist.
  return make_params(q, num_users, num_servers, collusion, alphas);
}

SystemParams make_params(std::uint64_t q, std::size_t num_users,
                         std::size_t num_servers, std::size_t collusion,
                         const std::vector<std::uint64_t>& alphas) {
  validate_counts(q, num_users, num_servers, collusion);
  const std::size_t message_len = num_servers - collusion - 1;

  if (alphas.size() != num_servers) {
    throw DimensionError("need exactly N=" + std::to_string(num_servers) +
                         " evaluation points, got " +
                         std::to_string(alphas.size()));
  }
  std::set<std::uint64_t> seen;
  SystemParams params;
  params.q = q;
  params.num_users = num_users;
  params.num_servers = num_servers;
  params.collusion = collusion;
  params.message_len = message_len;
  params.alphas.reserve(num_servers);
  for (std::uint64_t a : alphas) {
    if (a >= q) {
      throw DimensionError("evaluation point " + std::to_string(a) +
                           " outside GF(" + std::to_string(q) + ")");
    }
    if (!seen.insert(a).second) {
      throw DimensionError("evaluation points must be distinct, " +
                           std::to_string(a) + " repeats");
    }
    if (!shifts_nonzero(a, q, message_len)) {
      throw DimensionError("evaluation point " + std::to_string(a) +
                           " has a zero shift alpha+i for some i in [1:L]");
    }
    params.alphas.emplace_back(a, q);
  }
  return params;
}

FieldElement delta(const SystemParams& params, std::size_t server) {
  if (server < 1 || server > params.num_servers) {
    throw DimensionError("server index " + std::to_string(server) +
                         " outside [1:" + std::to_string(params.num_servers) +
                         "]");
  }
  const FieldElement alpha = params.alphas[server - 1];
  FieldElement acc = one(params.q);
  for (std::size_t i = 1; i <= params.message_len; ++i) {
    acc = acc * (FieldElement(i, params.q) + alpha);
  }
  return acc;
}

FieldMatrix build_decoding_matrix(const SystemParams& params) {
  const std::size_t n = params.num_servers;
  const std::size_t len = params.message_len;
  FieldMatrix m(n, n, params.q);
  for (std::size_t r = 0; r < n; ++r) {
    const FieldElement alpha = params.alphas[r];
    for (std::size_t l = 1; l <= len; ++l) {
      m.set(r, l - 1, (FieldElement(l, params.q) + alpha).inv());
    }
    for (std::size_t e = 0; e <= params.collusion; ++e) {
      m.set(r, len + e, alpha.pow(e));
    }
  }
  return m;
}

}  // namespace pedc
