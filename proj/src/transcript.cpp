#include "pedc/transcript.hpp"

#include <utility>

namespace pedc {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json vector_to_json(const FieldVector& v) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : v.elements()) arr.push_back(e.value());
  return arr;
}

FieldVector vector_from_json(const ordered_json& j, std::size_t len,
                             std::uint64_t q, const char* what) {
  if (!j.is_array() || j.size() != len) {
    throw Error(std::string("transcript: ") + what + " has wrong length");
  }
  std::vector<std::uint64_t> values;
  values.reserve(len);
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) {
      throw Error(std::string("transcript: ") + what +
                  " holds a non-integer symbol");
    }
    std::uint64_t v = x.get<std::uint64_t>();
    if (v >= q) {
      throw Error(std::string("transcript: ") + what + " symbol out of field");
    }
    values.push_back(v);
  }
  return FieldVector::from_values(values, q);
}

ordered_json block_to_json(const std::vector<FieldVector>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) arr.push_back(vector_to_json(r));
  return arr;
}

}  // namespace

ordered_json transcript_to_json(const Transcript& t) {
  ordered_json j;

  ordered_json params;
  params["q"] = t.params.q;
  params["K"] = t.params.num_users;
  params["N"] = t.params.num_servers;
  params["E"] = t.params.collusion;
  params["L"] = t.params.message_len;
  ordered_json alphas = ordered_json::array();
  for (const auto& a : t.params.alphas) alphas.push_back(a.value());
  params["alphas"] = std::move(alphas);
  j["params"] = std::move(params);

  j["seed"] = t.master_seed;

  ordered_json messages = ordered_json::array();
  for (const auto& m : t.messages) messages.push_back(vector_to_json(m.symbols));
  j["messages"] = std::move(messages);

  ordered_json noises = ordered_json::array();
  for (const auto& un : t.user_noises) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : un.z) {
      ordered_json r = ordered_json::array();
      for (const auto& e : row) r.push_back(e.value());
      rows.push_back(std::move(r));
    }
    noises.push_back(std::move(rows));
  }
  j["user_noises"] = std::move(noises);

  j["f"] = vector_to_json(t.f);
  j["collector_noise"] = block_to_json(t.collector_noise.rows);

  ordered_json stores = ordered_json::array();
  for (const auto& s : t.stores) stores.push_back(block_to_json(s.rows));
  j["stores"] = std::move(stores);

  ordered_json queries = ordered_json::array();
  for (const auto& qr : t.queries) queries.push_back(block_to_json(qr.rows));
  j["queries"] = std::move(queries);

  ordered_json answers = ordered_json::array();
  for (const auto& a : t.answers) answers.push_back(a.value.value());
  j["answers"] = std::move(answers);

  j["statistic"] = vector_to_json(t.statistic);

  ordered_json cost;
  cost["upload_symbols"] = t.cost.upload_symbols;
  cost["query_symbols"] = t.cost.query_symbols;
  cost["download_symbols"] = t.cost.download_symbols;
  j["cost"] = std::move(cost);

  ordered_json rate;
  rate["num"] = t.rate.num;
  rate["den"] = t.rate.den;
  j["rate"] = std::move(rate);

  return j;
}

Transcript transcript_from_json(const ordered_json& j) {
  const auto& pj = j.at("params");
  std::vector<std::uint64_t> alphas;
  for (const auto& a : pj.at("alphas")) alphas.push_back(a.get<std::uint64_t>());
  SystemParams params =
      make_params(pj.at("q").get<std::uint64_t>(),
                  pj.at("K").get<std::size_t>(), pj.at("N").get<std::size_t>(),
                  pj.at("E").get<std::size_t>(), alphas);
  if (pj.at("L").get<std::size_t>() != params.message_len) {
    throw Error("transcript: stored L contradicts N-E-1");
  }

  const std::uint64_t q = params.q;
  const std::size_t K = params.num_users;
  const std::size_t N = params.num_servers;
  const std::size_t E = params.collusion;
  const std::size_t L = params.message_len;

  Transcript t{params,
               j.at("seed").get<std::uint64_t>(),
               {},
               {},
               vector_from_json(j.at("f"), K, q, "f"),
               CollectorNoise{},
               {},
               {},
               {},
               vector_from_json(j.at("statistic"), L, q, "statistic"),
               CostAccounting{},
               Rational(L, N)};

  const auto& mj = j.at("messages");
  if (mj.size() != K) throw Error("transcript: message count != K");
  for (std::size_t k = 1; k <= K; ++k) {
    t.messages.push_back(
        Message{k, vector_from_json(mj[k - 1], L, q, "message")});
  }

  const auto& nj = j.at("user_noises");
  if (nj.size() != K) throw Error("transcript: noise count != K");
  for (std::size_t k = 1; k <= K; ++k) {
    UserNoise un{k, {}};
    if (nj[k - 1].size() != L) throw Error("transcript: noise rows != L");
    for (const auto& rowj : nj[k - 1]) {
      if (rowj.size() != E) throw Error("transcript: noise row width != E");
      std::vector<FieldElement> row;
      for (const auto& x : rowj) row.emplace_back(x.get<std::uint64_t>(), q);
      un.z.push_back(std::move(row));
    }
    t.user_noises.push_back(std::move(un));
  }

  const auto& cj = j.at("collector_noise");
  if (cj.size() != L) throw Error("transcript: collector noise rows != L");
  for (const auto& rowj : cj) {
    t.collector_noise.rows.push_back(
        vector_from_json(rowj, K, q, "collector_noise"));
  }

  const auto& sj = j.at("stores");
  if (sj.size() != N) throw Error("transcript: store count != N");
  for (std::size_t n = 1; n <= N; ++n) {
    ServerStore store{n, {}};
    if (sj[n - 1].size() != L) throw Error("transcript: store rows != L");
    for (const auto& rowj : sj[n - 1]) {
      store.rows.push_back(vector_from_json(rowj, K, q, "store"));
    }
    t.stores.push_back(std::move(store));
  }

  const auto& qj = j.at("queries");
  if (qj.size() != N) throw Error("transcript: query count != N");
  for (std::size_t n = 1; n <= N; ++n) {
    Query query{n, {}};
    if (qj[n - 1].size() != L) throw Error("transcript: query rows != L");
    for (const auto& rowj : qj[n - 1]) {
      query.rows.push_back(vector_from_json(rowj, K, q, "query"));
    }
    t.queries.push_back(std::move(query));
  }

  const auto& aj = j.at("answers");
  if (aj.size() != N) throw Error("transcript: answer count != N");
  for (std::size_t n = 1; n <= N; ++n) {
    t.answers.push_back(Answer{n, FieldElement(aj[n - 1].get<std::uint64_t>(), q)});
  }

  const auto& costj = j.at("cost");
  t.cost.upload_symbols = costj.at("upload_symbols").get<std::uint64_t>();
  t.cost.query_symbols = costj.at("query_symbols").get<std::uint64_t>();
  t.cost.download_symbols = costj.at("download_symbols").get<std::uint64_t>();

  const auto& ratej = j.at("rate");
  t.rate = Rational(ratej.at("num").get<std::uint64_t>(),
                    ratej.at("den").get<std::uint64_t>());

  return t;
}

std::string transcript_to_string(const Transcript& t) {
  return transcript_to_json(t).dump(2) + "\n";
}

Transcript transcript_from_string(const std::string& text) {
  return transcript_from_json(ordered_json::parse(text));
}

void verify_transcript(const Transcript& t) {
  const auto& params = t.params;

  // Upload phase replay.
  std::vector<std::vector<ShareRow>> per_server(params.num_servers);
  for (std::size_t k = 1; k <= params.num_users; ++k) {
    auto rows = encode_upload(params, t.messages[k - 1], t.user_noises[k - 1]);
    for (auto& row : rows) per_server[row.server - 1].push_back(std::move(row));
  }
  for (std::size_t n = 1; n <= params.num_servers; ++n) {
    if (assemble_store(params, n, per_server[n - 1]) != t.stores[n - 1]) {
      throw Error("transcript: stored shares do not match re-encoding");
    }
  }

  // Computation phase replay.
  for (std::size_t n = 1; n <= params.num_servers; ++n) {
    if (make_query(params, t.f, t.collector_noise, n) != t.queries[n - 1]) {
      throw Error("transcript: queries do not match re-generation");
    }
    if (answer(t.stores[n - 1], t.queries[n - 1]) != t.answers[n - 1]) {
      throw Error("transcript: answers do not match re-computation");
    }
  }

  const Statistic decoded = decode(params, t.answers, t.f, t.collector_noise);
  if (decoded != t.statistic) {
    throw Error("transcript: statistic does not match re-decoding");
  }
  if (decoded != compute_statistic_oracle(t.messages, t.f)) {
    throw Error("transcript: statistic does not match the direct oracle");
  }

  const std::uint64_t kN = static_cast<std::uint64_t>(params.num_users) *
                           params.num_servers * params.message_len;
  if (t.cost.upload_symbols != kN || t.cost.query_symbols != kN ||
      t.cost.download_symbols != params.num_servers) {
    throw Error("transcript: cost accounting mismatch");
  }
  if (t.rate != Rational(params.message_len, params.num_servers)) {
    throw Error("transcript: rate is not L/N in lowest terms");
  }
}

}  // namespace pedc
