#include "pedc/sim.hpp"

#include <utility>

#include "pedc/rng.hpp"

namespace pedc {

namespace {

// In-process mail between parties. Each server sees only what is
// addressed to it; the collector sees only answers.
struct ServerMailbox {
  std::vector<ShareRow> uploads;
  std::optional<Query> query;
};

struct UserParty {
  std::size_t user;
  Message message;
  UserNoise noise;

  // Upload phase: deposit one masked row at every server's mailbox.
  std::vector<ShareRow> upload(const SystemParams& params,
                               std::vector<ServerMailbox>& mail) const {
    auto rows = encode_upload(params, message, noise);
    for (const auto& row : rows) mail[row.server - 1].uploads.push_back(row);
    return rows;
  }
};

struct ServerParty {
  std::size_t server;
  std::optional<ServerStore> store;

  void end_upload_phase(const SystemParams& params, ServerMailbox& mail) {
    store = assemble_store(params, server, mail.uploads);
  }

  Answer respond(const ServerMailbox& mail) const {
    return answer(*store, *mail.query);
  }
};

}  // namespace

Transcript run_protocol(const SystemParams& params, std::uint64_t seed,
                        const RunOptions& options) {
  const std::uint64_t q = params.q;
  const std::size_t K = params.num_users;
  const std::size_t N = params.num_servers;
  const std::size_t E = params.collusion;
  const std::size_t L = params.message_len;

  if (options.messages && options.messages->size() != K) {
    throw DimensionError("fixed messages must cover all K users");
  }
  if (options.user_noises && options.user_noises->size() != K) {
    throw DimensionError("fixed user noises must cover all K users");
  }

  // Streams are derived up front so party scheduling can never reorder
  // draws. Per user: W_k first, then Z^k row by row.
  std::vector<UserParty> users;
  users.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) {
    SeededRng rng(derive_seed(seed, StreamRole::kUser, k));
    Message message =
        options.messages ? options.messages->at(k - 1)
                         : Message{k, rng.field_vector(L, q)};
    if (options.messages && message.user != k) {
      throw DimensionError("fixed messages must arrive in user order 1..K");
    }
    UserNoise noise{k, {}};
    if (options.user_noises) {
      noise = options.user_noises->at(k - 1);
    } else {
      for (std::size_t l = 0; l < L; ++l) {
        std::vector<FieldElement> row;
        row.reserve(E);
        for (std::size_t e = 0; e < E; ++e) row.push_back(rng.field_element(q));
        noise.z.push_back(std::move(row));
      }
    }
    users.push_back(UserParty{k, std::move(message), std::move(noise)});
  }

  // Collector stream: f first, then Z' row by row.
  SeededRng collector_rng(derive_seed(seed, StreamRole::kCollector, 0));
  Coefficients f = options.f ? *options.f : collector_rng.field_vector(K, q);
  CollectorNoise zp;
  if (options.collector_noise) {
    zp = *options.collector_noise;
  } else {
    for (std::size_t l = 0; l < L; ++l) {
      zp.rows.push_back(collector_rng.field_vector(K, q));
    }
  }

  Transcript t{params,
               seed,
               {},
               {},
               f,
               zp,
               {},
               {},
               {},
               FieldVector::zeros(L, q),
               CostAccounting{},
               Rational(L, N)};

  // Upload phase.
  std::vector<ServerMailbox> mail(N);
  for (const auto& user : users) {
    user.upload(params, mail);
    t.messages.push_back(user.message);
    t.user_noises.push_back(user.noise);
  }

  std::vector<ServerParty> servers;
  servers.reserve(N);
  for (std::size_t n = 1; n <= N; ++n) {
    ServerParty server{n, std::nullopt};
    server.end_upload_phase(params, mail[n - 1]);
    servers.push_back(std::move(server));
    t.stores.push_back(*servers.back().store);
  }

  // Computation phase: query out, one symbol back per server.
  for (std::size_t n = 1; n <= N; ++n) {
    mail[n - 1].query = make_query(params, f, zp, n);
    t.queries.push_back(*mail[n - 1].query);
  }
  for (std::size_t n = 1; n <= N; ++n) {
    t.answers.push_back(servers[n - 1].respond(mail[n - 1]));
  }

  t.statistic = decode(params, t.answers, f, zp);

  const std::uint64_t knl = static_cast<std::uint64_t>(K) * N * L;
  t.cost = CostAccounting{knl, knl, t.answers.size()};
  // Measured, not assumed: symbols decoded per symbol downloaded.
  t.rate = Rational(t.statistic.size(), t.cost.download_symbols);
  return t;
}

PartyView extract_view(const Transcript& t, Role role) {
  switch (role.kind) {
    case Role::Kind::kUser: {
      const std::size_t k = role.index;
      if (k < 1 || k > t.params.num_users) {
        throw DimensionError("no user " + std::to_string(k));
      }
      UserView view{k, t.messages[k - 1], t.user_noises[k - 1], {}};
      // A user re-derives its uploads from its own state; they are part
      // of its view, not of anyone else's.
      view.uploads = encode_upload(t.params, view.message, view.noise);
      return view;
    }
    case Role::Kind::kServer: {
      const std::size_t n = role.index;
      if (n < 1 || n > t.params.num_servers) {
        throw DimensionError("no server " + std::to_string(n));
      }
      return ServerView{n, t.stores[n - 1], t.queries[n - 1],
                        t.answers[n - 1]};
    }
    case Role::Kind::kCollector:
      return CollectorView{t.f, t.collector_noise, t.queries, t.answers,
                           t.statistic};
  }
  throw Error("unreachable role");
}

namespace {

nlohmann::ordered_json vec_json(const FieldVector& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : v.elements()) arr.push_back(e.value());
  return arr;
}

nlohmann::ordered_json block_json(const std::vector<FieldVector>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(vec_json(r));
  return arr;
}

}  // namespace

nlohmann::ordered_json view_to_json(const PartyView& view) {
  nlohmann::ordered_json j;
  if (const auto* u = std::get_if<UserView>(&view)) {
    j["role"] = "user";
    j["user"] = u->user;
    j["message"] = vec_json(u->message.symbols);
    nlohmann::ordered_json noise = nlohmann::ordered_json::array();
    for (const auto& row : u->noise.z) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& e : row) r.push_back(e.value());
      noise.push_back(std::move(r));
    }
    j["noise"] = std::move(noise);
    nlohmann::ordered_json uploads = nlohmann::ordered_json::array();
    for (const auto& row : u->uploads) {
      nlohmann::ordered_json entry;
      entry["server"] = row.server;
      entry["symbols"] = vec_json(row.symbols);
      uploads.push_back(std::move(entry));
    }
    j["uploads"] = std::move(uploads);
  } else if (const auto* s = std::get_if<ServerView>(&view)) {
    j["role"] = "server";
    j["server"] = s->server;
    j["store"] = block_json(s->store.rows);
    j["query"] = block_json(s->query.rows);
    j["answer"] = s->answer.value.value();
  } else {
    const auto& c = std::get<CollectorView>(view);
    j["role"] = "collector";
    j["f"] = vec_json(c.f);
    j["collector_noise"] = block_json(c.noise.rows);
    nlohmann::ordered_json queries = nlohmann::ordered_json::array();
    for (const auto& qr : c.queries) queries.push_back(block_json(qr.rows));
    j["queries"] = std::move(queries);
    nlohmann::ordered_json answers = nlohmann::ordered_json::array();
    for (const auto& a : c.answers) answers.push_back(a.value.value());
    j["answers"] = std::move(answers);
    j["statistic"] = vec_json(c.statistic);
  }
  return j;
}

std::vector<RateRow> sweep_rates(const std::vector<GridPoint>& grid,
                                 std::uint64_t seed) {
  std::vector<RateRow> rows;
  rows.reserve(grid.size());
  std::uint64_t row_index = 0;
  for (const auto& point : grid) {
    RateRow row;
    row.num_users = point.num_users;
    row.num_servers = point.num_servers;
    row.collusion = point.collusion;
    row.measured_rate = Rational(0, 1);
    row.capacity = Rational(0, 1);

    std::uint64_t q = point.q;
    if (q == 0 && point.collusion + 1 < point.num_servers) {
      // Smallest field hosting N valid evaluation points.
      const std::uint64_t need =
          point.num_servers + (point.num_servers - point.collusion - 1);
      q = need < 2 ? 2 : need;
      while (!is_prime(q)) ++q;
    }
    row.q = q;

    try {
      SystemParams params =
          make_params(q, point.num_users, point.num_servers, point.collusion);
      Transcript t = run_protocol(
          params, derive_seed(seed, StreamRole::kSweep, row_index));
      row.message_len = params.message_len;
      row.feasible = true;
      // Measured from the transcript, not assumed: decoded symbols per
      // downloaded symbol.
      row.measured_rate =
          Rational(t.statistic.size(), t.cost.download_symbols);
      row.capacity = Rational(params.message_len, params.num_servers);
      row.match = row.measured_rate == row.capacity;
    } catch (const InfeasibleConfigError& e) {
      row.feasible = false;
      row.reason = e.what();
      row.match = true;  // zero branch: measured 0 equals capacity 0
    } catch (const Error& e) {
      row.feasible = false;
      row.reason = e.what();
      row.match = false;  // artifact limitation (q too small etc.), not a capacity statement
    }
    rows.push_back(std::move(row));
    ++row_index;
  }
  return rows;
}

}  // namespace pedc
