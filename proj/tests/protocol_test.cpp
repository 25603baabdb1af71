#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "pedc/protocol.hpp"
#include "pedc/rng.hpp"

using namespace pedc;

namespace {

// The hand-traceable GF(7) run used throughout: K=2, N=3, E=1, L=1,
// alphas (0,1,2), W_1=(3), W_2=(5), Z^1=(2), Z^2=(4), f=(1,1), Z'=(1,2).
struct WorkedExample {
  SystemParams params = make_params(7, 2, 3, 1);
  Message w1{1, FieldVector::from_values({3}, 7)};
  Message w2{2, FieldVector::from_values({5}, 7)};
  UserNoise z1{1, {{FieldElement(2, 7)}}};
  UserNoise z2{2, {{FieldElement(4, 7)}}};
  Coefficients f = FieldVector::from_values({1, 1}, 7);
  CollectorNoise zp{{FieldVector::from_values({1, 2}, 7)}};

  std::vector<ServerStore> stores() const {
    auto rows1 = encode_upload(params, w1, z1);
    auto rows2 = encode_upload(params, w2, z2);
    std::vector<ServerStore> out;
    for (std::size_t n = 1; n <= 3; ++n) {
      out.push_back(
          assemble_store(params, n, {rows1[n - 1], rows2[n - 1]}));
    }
    return out;
  }

  std::vector<Answer> answers() const {
    std::vector<Answer> out;
    for (const auto& store : stores()) {
      out.push_back(answer(store, make_query(params, f, zp, store.server)));
    }
    return out;
  }
};

UserNoise zero_noise(const SystemParams& params, std::size_t user) {
  UserNoise noise{user, {}};
  noise.z.assign(params.message_len,
                 std::vector<FieldElement>(params.collusion,
                                           FieldElement(0, params.q)));
  return noise;
}

CollectorNoise zero_collector_noise(const SystemParams& params) {
  CollectorNoise zp;
  zp.rows.assign(params.message_len,
                 FieldVector::zeros(params.num_users, params.q));
  return zp;
}

}  // namespace

TEST_CASE("make_params derives L and picks the smallest valid alphas") {
  const SystemParams params = make_params(7, 2, 3, 1);
  CHECK(params.message_len == 1);
  REQUIRE(params.alphas.size() == 3);
  // alpha=6 is skipped: 6+1 = 0 in GF(7).
  CHECK(params.alphas[0] == FieldElement(0, 7));
  CHECK(params.alphas[1] == FieldElement(1, 7));
  CHECK(params.alphas[2] == FieldElement(2, 7));
}

TEST_CASE("make_params rejects E >= N-1") {
  CHECK_THROWS_AS(make_params(7, 2, 3, 2), InfeasibleConfigError);
  CHECK_THROWS_AS(make_params(5, 2, 2, 1), InfeasibleConfigError);  // L = 0
  CHECK_THROWS_AS(make_params(11, 3, 4, 5), InfeasibleConfigError);
}

TEST_CASE("make_params rejects invalid fields") {
  CHECK_THROWS_AS(make_params(6, 2, 3, 1), NotPrimeError);
  CHECK_THROWS_AS(make_params(3, 2, 3, 1), FieldTooSmallError);  // q < N+L
}

TEST_CASE("make_params validates explicit evaluation points") {
  CHECK_NOTHROW(make_params(7, 2, 3, 1, {2, 4, 5}));
  CHECK_THROWS_AS(make_params(7, 2, 3, 1, {0, 1, 6}), DimensionError);  // 6+1=0
  CHECK_THROWS_AS(make_params(7, 2, 3, 1, {0, 0, 1}), DimensionError);
  CHECK_THROWS_AS(make_params(7, 2, 3, 1, {0, 1}), DimensionError);
  CHECK_THROWS_AS(make_params(7, 2, 3, 1, {0, 1, 9}), DimensionError);
}

TEST_CASE("delta is the shift product and never zero") {
  const SystemParams params = make_params(7, 2, 3, 1);
  CHECK(delta(params, 3) == FieldElement(3, 7));  // L=1, alpha=2: 1+2

  const SystemParams wide = make_params(7, 2, 4, 1);  // L=2, alphas 0..3
  CHECK(delta(wide, 2) == FieldElement(6, 7));  // alpha=1: (1+1)(2+1)

  for (std::size_t n = 1; n <= wide.num_servers; ++n) {
    CHECK(!delta(wide, n).is_zero());
  }
  CHECK_THROWS_AS(delta(params, 0), DimensionError);
  CHECK_THROWS_AS(delta(params, 4), DimensionError);
}

TEST_CASE("encode_upload evaluates the masking polynomial per server") {
  const WorkedExample ex;
  const auto rows = encode_upload(ex.params, ex.w1, ex.z1);
  REQUIRE(rows.size() == 3);
  // alpha_2 = 1: 3 + (1+1)*2 = 0 in GF(7).
  CHECK(rows[1].symbols == FieldVector::from_values({0}, 7));
  // Full spread across servers: (5, 0, 2).
  CHECK(rows[0].symbols == FieldVector::from_values({5}, 7));
  CHECK(rows[2].symbols == FieldVector::from_values({2}, 7));
  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(rows[n - 1].server == n);
    CHECK(rows[n - 1].user == 1);
  }
}

TEST_CASE("encode_upload with zero noise exposes the message") {
  const WorkedExample ex;
  const auto rows =
      encode_upload(ex.params, ex.w1, zero_noise(ex.params, 1));
  for (const auto& row : rows) CHECK(row.symbols == ex.w1.symbols);
}

TEST_CASE("encode_upload is deterministic and checks shapes") {
  const WorkedExample ex;
  CHECK(encode_upload(ex.params, ex.w1, ex.z1) ==
        encode_upload(ex.params, ex.w1, ex.z1));

  UserNoise bad{1, {}};  // zero rows instead of L
  CHECK_THROWS_AS(encode_upload(ex.params, ex.w1, bad), DimensionError);
  Message wrong_len{1, FieldVector::from_values({3, 3}, 7)};
  CHECK_THROWS_AS(encode_upload(ex.params, wrong_len, ex.z1), DimensionError);
  CHECK_THROWS_AS(encode_upload(ex.params, ex.w1, ex.z2), DimensionError);
}

TEST_CASE("assemble_store lays shares out l-major, k-minor") {
  const WorkedExample ex;
  const auto stores = ex.stores();
  REQUIRE(stores.size() == 3);
  // Server 1 (alpha=0): user rows 3+1*2=5 and 5+1*4=2.
  CHECK(stores[0].rows ==
        std::vector<FieldVector>{FieldVector::from_values({5, 2}, 7)});
  // Server 3 (alpha=2): 3+3*2=2 and 5+3*4=3.
  CHECK(stores[2].rows ==
        std::vector<FieldVector>{FieldVector::from_values({2, 3}, 7)});
}

TEST_CASE("assemble_store with a single user is that user's rows") {
  const SystemParams params = make_params(7, 1, 3, 1);
  const Message w{1, FieldVector::from_values({4}, 7)};
  const auto rows = encode_upload(params, w, UserNoise{1, {{FieldElement(6, 7)}}});
  const ServerStore store = assemble_store(params, 2, {rows[1]});
  CHECK(store.rows == std::vector<FieldVector>{rows[1].symbols});
}

TEST_CASE("assemble_store rejects wrong share sets") {
  const WorkedExample ex;
  const auto rows1 = encode_upload(ex.params, ex.w1, ex.z1);
  const auto rows2 = encode_upload(ex.params, ex.w2, ex.z2);

  CHECK_THROWS_AS(assemble_store(ex.params, 1, {rows1[0]}), DimensionError);
  CHECK_THROWS_AS(assemble_store(ex.params, 1, {rows1[0], rows1[0]}),
                  DimensionError);
  CHECK_THROWS_AS(assemble_store(ex.params, 1, {rows1[0], rows2[1]}),
                  DimensionError);
}

TEST_CASE("make_query blinds f with shifted collector noise") {
  const WorkedExample ex;
  // L=1 makes Delta_n/(1+alpha_n) = 1, so Q_n = f + (1+alpha_n) Z'_1.
  CHECK(make_query(ex.params, ex.f, ex.zp, 1).rows ==
        std::vector<FieldVector>{FieldVector::from_values({2, 3}, 7)});
  CHECK(make_query(ex.params, ex.f, ex.zp, 3).rows ==
        std::vector<FieldVector>{FieldVector::from_values({4, 0}, 7)});
}

TEST_CASE("make_query with zero noise is a scaled f") {
  const WorkedExample ex;
  const auto zp0 = zero_collector_noise(ex.params);
  for (std::size_t n = 1; n <= 3; ++n) {
    CHECK(make_query(ex.params, ex.f, zp0, n).rows ==
          std::vector<FieldVector>{ex.f});  // scale is 1 when L=1
  }
}

TEST_CASE("encode_upload applies rising shift powers for E=2") {
  const SystemParams params = make_params(7, 1, 5, 2);  // L=2, alphas 0..4
  const Message w{1, FieldVector::from_values({1, 4}, 7)};
  UserNoise noise{1, {}};
  noise.z = {{FieldElement(5, 7), FieldElement(0, 7)},
             {FieldElement(2, 7), FieldElement(3, 7)}};
  const auto rows = encode_upload(params, w, noise);
  // Server 2 (alpha=1): l=1 gives 1 + 2*5 + 4*0 = 4, l=2 gives
  // 4 + 3*2 + 2*3 = 2 in GF(7).
  CHECK(rows[1].symbols == FieldVector::from_values({4, 2}, 7));
}

TEST_CASE("make_query scales each row by Delta_n/(l+alpha_n)") {
  const SystemParams params = make_params(7, 2, 4, 1);  // L=2, alphas 0..3
  const Coefficients f = FieldVector::from_values({1, 1}, 7);
  CollectorNoise zp;
  zp.rows.assign(2, FieldVector::zeros(2, 7));
  // Server 1: Delta_1 = 1*2 = 2, so rows are 2f and f.
  const Query query = make_query(params, f, zp, 1);
  CHECK(query.rows[0] == FieldVector::from_values({2, 2}, 7));
  CHECK(query.rows[1] == FieldVector::from_values({1, 1}, 7));
}

TEST_CASE("make_query validates dimensions") {
  const WorkedExample ex;
  const Coefficients short_f = FieldVector::from_values({1}, 7);
  CHECK_THROWS_AS(make_query(ex.params, short_f, ex.zp, 1), DimensionError);
  CollectorNoise bad;
  CHECK_THROWS_AS(make_query(ex.params, ex.f, bad, 1), DimensionError);
  CHECK_THROWS_AS(make_query(ex.params, ex.f, ex.zp, 0), DimensionError);
}

TEST_CASE("answer is the store/query inner product") {
  const WorkedExample ex;
  const auto stores = ex.stores();
  const auto q1 = make_query(ex.params, ex.f, ex.zp, 1);
  const auto q3 = make_query(ex.params, ex.f, ex.zp, 3);

  CHECK(answer(stores[0], q1).value == FieldElement(2, 7));  // 5*2+2*3
  CHECK(answer(stores[2], q3).value == FieldElement(1, 7));  // 2*4+3*0

  ServerStore zeros{1, {FieldVector::zeros(2, 7)}};
  CHECK(answer(zeros, q1).value == FieldElement(0, 7));

  CHECK_THROWS_AS(answer(stores[0], q3), DimensionError);  // id mismatch
  ServerStore ragged{1, {FieldVector::zeros(3, 7)}};
  CHECK_THROWS_AS(answer(ragged, q1), DimensionError);
}

TEST_CASE("decode recovers the statistic from the worked answers") {
  const WorkedExample ex;
  const auto answers = ex.answers();
  REQUIRE(answers.size() == 3);
  CHECK(answers[0].value == FieldElement(2, 7));
  CHECK(answers[1].value == FieldElement(2, 7));
  CHECK(answers[2].value == FieldElement(1, 7));

  const Statistic decoded = decode(ex.params, answers, ex.f, ex.zp);
  CHECK(decoded == FieldVector::from_values({1}, 7));  // 3+5 mod 7
  CHECK(decoded == compute_statistic_oracle({ex.w1, ex.w2}, ex.f));
}

TEST_CASE("decode of the zero coefficient vector is zero") {
  const WorkedExample ex;
  const Coefficients f0 = FieldVector::zeros(2, 7);
  std::vector<Answer> answers;
  for (const auto& store : ex.stores()) {
    answers.push_back(
        answer(store, make_query(ex.params, f0, ex.zp, store.server)));
  }
  CHECK(decode(ex.params, answers, f0, ex.zp) ==
        FieldVector::zeros(1, 7));
}

TEST_CASE("decode demands all N answers in server order") {
  const WorkedExample ex;
  auto answers = ex.answers();
  CHECK_THROWS_AS(decode(ex.params, {answers[0], answers[1]}, ex.f, ex.zp),
                  DimensionError);
  std::swap(answers[0], answers[1]);
  CHECK_THROWS_AS(decode(ex.params, answers, ex.f, ex.zp), DimensionError);
}

TEST_CASE("unit coefficient vectors select exactly one message") {
  // Exhaustive at q=5, K=2, N=3, E=1: every W, user noise and collector
  // noise assignment, f = e_1 and e_2.
  const SystemParams params = make_params(5, 2, 3, 1);
  for (std::uint64_t w1 = 0; w1 < 5; ++w1) {
    for (std::uint64_t w2 = 0; w2 < 5; ++w2) {
      const Message m1{1, FieldVector::from_values({w1}, 5)};
      const Message m2{2, FieldVector::from_values({w2}, 5)};
      for (std::uint64_t z1 = 0; z1 < 5; ++z1) {
        for (std::uint64_t z2 = 0; z2 < 5; ++z2) {
          const UserNoise n1{1, {{FieldElement(z1, 5)}}};
          const UserNoise n2{2, {{FieldElement(z2, 5)}}};
          const auto rows1 = encode_upload(params, m1, n1);
          const auto rows2 = encode_upload(params, m2, n2);
          std::vector<ServerStore> stores;
          for (std::size_t n = 1; n <= 3; ++n) {
            stores.push_back(
                assemble_store(params, n, {rows1[n - 1], rows2[n - 1]}));
          }
          for (std::uint64_t zp1 = 0; zp1 < 5; ++zp1) {
            for (std::uint64_t zp2 = 0; zp2 < 5; ++zp2) {
              const CollectorNoise zp{
                  {FieldVector::from_values({zp1, zp2}, 5)}};
              for (std::size_t k = 1; k <= 2; ++k) {
                std::vector<std::uint64_t> unit(2, 0);
                unit[k - 1] = 1;
                const Coefficients f = FieldVector::from_values(unit, 5);
                std::vector<Answer> answers;
                for (const auto& store : stores) {
                  answers.push_back(answer(
                      store, make_query(params, f, zp, store.server)));
                }
                CHECK(decode(params, answers, f, zp) ==
                      (k == 1 ? m1.symbols : m2.symbols));
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("statistic oracle hand values") {
  const Message w1{1, FieldVector::from_values({3}, 7)};
  const Message w2{2, FieldVector::from_values({5}, 7)};
  CHECK(compute_statistic_oracle({w1, w2}, FieldVector::from_values({1, 1}, 7)) ==
        FieldVector::from_values({1}, 7));
  CHECK(compute_statistic_oracle({w1, w2}, FieldVector::from_values({1, 0}, 7)) ==
        w1.symbols);
  CHECK(compute_statistic_oracle({w1, w2}, FieldVector::zeros(2, 7)) ==
        FieldVector::zeros(1, 7));
  CHECK_THROWS_AS(compute_statistic_oracle({w1}, FieldVector::from_values({1, 1}, 7)),
                  DimensionError);
}

TEST_CASE("end-to-end exactness over random configurations") {
  SeededRng rng(99);
  const std::vector<std::uint64_t> primes = {7, 11, 13};
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t q = primes[rng.uniform_below(primes.size())];
    const std::size_t n = 3 + rng.uniform_below(4);  // N in [3,6]
    const std::size_t e = 1 + rng.uniform_below(n - 2);
    if (q < 2 * n - e - 1) continue;
    const SystemParams params = make_params(q, 1 + rng.uniform_below(4), n, e);

    std::vector<Message> messages;
    std::vector<std::vector<ShareRow>> per_server(params.num_servers);
    for (std::size_t k = 1; k <= params.num_users; ++k) {
      messages.push_back(Message{k, rng.field_vector(params.message_len, q)});
      UserNoise noise{k, {}};
      for (std::size_t l = 0; l < params.message_len; ++l) {
        std::vector<FieldElement> row;
        for (std::size_t i = 0; i < params.collusion; ++i) {
          row.push_back(rng.field_element(q));
        }
        noise.z.push_back(std::move(row));
      }
      for (auto& share : encode_upload(params, messages.back(), noise)) {
        per_server[share.server - 1].push_back(std::move(share));
      }
    }
    const Coefficients f = rng.field_vector(params.num_users, q);
    CollectorNoise zp;
    for (std::size_t l = 0; l < params.message_len; ++l) {
      zp.rows.push_back(rng.field_vector(params.num_users, q));
    }
    std::vector<Answer> answers;
    for (std::size_t server = 1; server <= params.num_servers; ++server) {
      const ServerStore store =
          assemble_store(params, server, per_server[server - 1]);
      answers.push_back(answer(store, make_query(params, f, zp, server)));
    }
    CHECK(decode(params, answers, f, zp) ==
          compute_statistic_oracle(messages, f));
  }
}

TEST_CASE("interference symbols do not depend on server ordering") {
  const WorkedExample ex;
  const auto base = decode_with_interference(ex.params, ex.answers());
  CHECK(base.statistic == FieldVector::from_values({1}, 7));
  REQUIRE(base.interference.size() == 2);  // I_0, I_1
  CHECK(base.interference[0] == FieldElement(1, 7));
  CHECK(base.interference[1] == FieldElement(3, 7));

  // Same run with the servers relabeled: alphas permuted to (2,0,1).
  const SystemParams permuted = make_params(7, 2, 3, 1, {2, 0, 1});
  const auto rows1 = encode_upload(permuted, ex.w1, ex.z1);
  const auto rows2 = encode_upload(permuted, ex.w2, ex.z2);
  std::vector<Answer> answers;
  for (std::size_t n = 1; n <= 3; ++n) {
    const ServerStore store =
        assemble_store(permuted, n, {rows1[n - 1], rows2[n - 1]});
    answers.push_back(answer(store, make_query(permuted, ex.f, ex.zp, n)));
  }
  const auto reordered = decode_with_interference(permuted, answers);
  CHECK(reordered.statistic == base.statistic);
  CHECK(reordered.interference == base.interference);
}
