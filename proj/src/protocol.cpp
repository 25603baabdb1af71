#include "pedc/protocol.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace pedc {

namespace {

void check_message(const SystemParams& params, const Message& message) {
  if (message.user < 1 || message.user > params.num_users) {
    throw DimensionError("user index " + std::to_string(message.user) +
                         " outside [1:" + std::to_string(params.num_users) +
                         "]");
  }
  if (message.symbols.size() != params.message_len ||
      message.symbols.modulus() != params.q) {
    throw DimensionError("message must hold L=" +
                         std::to_string(params.message_len) +
                         " symbols of GF(" + std::to_string(params.q) + ")");
  }
}

void check_user_noise(const SystemParams& params, const UserNoise& noise) {
  if (noise.z.size() != params.message_len) {
    throw DimensionError("user noise needs L=" +
                         std::to_string(params.message_len) + " rows, got " +
                         std::to_string(noise.z.size()));
  }
  for (const auto& row : noise.z) {
    if (row.size() != params.collusion) {
      throw DimensionError("user noise rows must hold E=" +
                           std::to_string(params.collusion) + " symbols");
    }
    for (const auto& e : row) {
      if (e.modulus() != params.q) {
        throw ModulusMismatchError("user noise modulus mismatch");
      }
    }
  }
}

void check_coefficients(const SystemParams& params, const Coefficients& f) {
  if (f.size() != params.num_users || f.modulus() != params.q) {
    throw DimensionError("coefficients must hold K=" +
                         std::to_string(params.num_users) +
                         " symbols of GF(" + std::to_string(params.q) + ")");
  }
}

void check_collector_noise(const SystemParams& params,
                           const CollectorNoise& zp) {
  if (zp.rows.size() != params.message_len) {
    throw DimensionError("collector noise needs L=" +
                         std::to_string(params.message_len) + " rows");
  }
  for (const auto& row : zp.rows) {
    if (row.size() != params.num_users || row.modulus() != params.q) {
      throw DimensionError("collector noise rows must hold K symbols");
    }
  }
}

void check_server_index(const SystemParams& params, std::size_t server) {
  if (server < 1 || server > params.num_servers) {
    throw DimensionError("server index " + std::to_string(server) +
                         " outside [1:" + std::to_string(params.num_servers) +
                         "]");
  }
}

}  // namespace

std::vector<ShareRow> encode_upload(const SystemParams& params,
                                    const Message& message,
                                    const UserNoise& noise) {
  check_message(params, message);
  check_user_noise(params, noise);
  if (noise.user != message.user) {
    throw DimensionError("noise belongs to user " + std::to_string(noise.user) +
                         ", message to user " + std::to_string(message.user));
  }

  std::vector<ShareRow> rows;
  rows.reserve(params.num_servers);
  for (std::size_t n = 1; n <= params.num_servers; ++n) {
    const FieldElement alpha = params.alphas[n - 1];
    std::vector<FieldElement> symbols;
    symbols.reserve(params.message_len);
    for (std::size_t l = 1; l <= params.message_len; ++l) {
      const FieldElement shift = FieldElement(l, params.q) + alpha;
      FieldElement masked = message.symbols[l - 1];
      for (std::size_t e = 1; e <= params.collusion; ++e) {
        masked = masked + shift.pow(e) * noise.z[l - 1][e - 1];
      }
      symbols.push_back(masked);
    }
    rows.push_back(ShareRow{message.user, n, FieldVector(std::move(symbols))});
  }
  return rows;
}

ServerStore assemble_store(const SystemParams& params, std::size_t server,
                           const std::vector<ShareRow>& shares) {
  check_server_index(params, server);
  if (shares.size() != params.num_users) {
    throw DimensionError("server " + std::to_string(server) + " expects K=" +
                         std::to_string(params.num_users) + " share rows, got " +
                         std::to_string(shares.size()));
  }

  // One row per user, any arrival order.
  std::vector<const ShareRow*> by_user(params.num_users, nullptr);
  for (const auto& share : shares) {
    if (share.server != server) {
      throw DimensionError("share addressed to server " +
                           std::to_string(share.server) + " handed to server " +
                           std::to_string(server));
    }
    if (share.user < 1 || share.user > params.num_users) {
      throw DimensionError("share from unknown user " +
                           std::to_string(share.user));
    }
    if (share.symbols.size() != params.message_len ||
        share.symbols.modulus() != params.q) {
      throw DimensionError("share row has wrong shape");
    }
    if (by_user[share.user - 1] != nullptr) {
      throw DimensionError("duplicate share from user " +
                           std::to_string(share.user));
    }
    by_user[share.user - 1] = &share;
  }
  for (std::size_t k = 1; k <= params.num_users; ++k) {
    if (by_user[k - 1] == nullptr) {
      throw DimensionError("missing share from user " + std::to_string(k));
    }
  }

  ServerStore store{server, {}};
  store.rows.reserve(params.message_len);
  for (std::size_t l = 1; l <= params.message_len; ++l) {
    std::vector<FieldElement> row;
    row.reserve(params.num_users);
    for (std::size_t k = 1; k <= params.num_users; ++k) {
      row.push_back(by_user[k - 1]->symbols[l - 1]);
    }
    store.rows.push_back(FieldVector(std::move(row)));
  }
  return store;
}

Query make_query(const SystemParams& params, const Coefficients& f,
                 const CollectorNoise& zp, std::size_t server) {
  check_coefficients(params, f);
  check_collector_noise(params, zp);
  check_server_index(params, server);

  const FieldElement alpha = params.alphas[server - 1];
  const FieldElement delta_n = delta(params, server);

  Query query{server, {}};
  query.rows.reserve(params.message_len);
  for (std::size_t l = 1; l <= params.message_len; ++l) {
    const FieldElement shift = FieldElement(l, params.q) + alpha;
    const FieldElement scale = delta_n * shift.inv();
    query.rows.push_back(
        (f + zp.rows[l - 1].scaled(shift)).scaled(scale));
  }
  return query;
}

Answer answer(const ServerStore& store, const Query& query) {
  if (store.server != query.server) {
    throw DimensionError("store for server " + std::to_string(store.server) +
                         " answered with query for server " +
                         std::to_string(query.server));
  }
  if (store.rows.size() != query.rows.size() || store.rows.empty()) {
    throw DimensionError("store/query row counts differ");
  }
  FieldElement acc(0, store.rows.front().modulus());
  for (std::size_t l = 0; l < store.rows.size(); ++l) {
    acc = acc + store.rows[l].dot(query.rows[l]);
  }
  return Answer{store.server, acc};
}

DecodeResult decode_with_interference(const SystemParams& params,
                                      const std::vector<Answer>& answers) {
  if (answers.size() != params.num_servers) {
    throw DimensionError("decode needs all N=" +
                         std::to_string(params.num_servers) + " answers, got " +
                         std::to_string(answers.size()));
  }
  std::vector<FieldElement> scaled;
  scaled.reserve(params.num_servers);
  for (std::size_t n = 1; n <= params.num_servers; ++n) {
    if (answers[n - 1].server != n) {
      throw DimensionError("answers must arrive in server order 1..N");
    }
    if (answers[n - 1].value.modulus() != params.q) {
      throw ModulusMismatchError("answer modulus mismatch");
    }
    scaled.push_back(answers[n - 1].value * delta(params, n).inv());
  }

  FieldVector solution =
      solve_linear(build_decoding_matrix(params), FieldVector(std::move(scaled)));

  std::vector<FieldElement> stat(solution.elements().begin(),
                                 solution.elements().begin() +
                                     params.message_len);
  std::vector<FieldElement> interference(
      solution.elements().begin() + params.message_len,
      solution.elements().end());
  return DecodeResult{Statistic(std::move(stat)), std::move(interference)};
}

Statistic decode(const SystemParams& params, const std::vector<Answer>& answers,
                 const Coefficients& f, const CollectorNoise& zp) {
  // f and Z' are part of the reconstruction interface; the scheme's
  // system solve needs only the scaled answers.
  check_coefficients(params, f);
  check_collector_noise(params, zp);
  return decode_with_interference(params, answers).statistic;
}

Statistic compute_statistic_oracle(const std::vector<Message>& messages,
                                   const Coefficients& f) {
  if (messages.empty() || messages.size() != f.size()) {
    throw DimensionError("oracle needs one coefficient per message");
  }
  for (std::size_t k = 1; k <= messages.size(); ++k) {
    if (messages[k - 1].user != k) {
      throw DimensionError("messages must arrive in user order 1..K");
    }
  }
  FieldVector acc = messages.front().symbols.scaled(f[0]);
  for (std::size_t k = 2; k <= messages.size(); ++k) {
    acc = acc + messages[k - 1].symbols.scaled(f[k - 1]);
  }
  return acc;
}

}  // namespace pedc
