#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "pedc/sim.hpp"

using namespace pedc;

namespace {

RunOptions worked_example_inputs() {
  RunOptions options;
  options.messages = {{1, FieldVector::from_values({3}, 7)},
                      {2, FieldVector::from_values({5}, 7)}};
  options.f = FieldVector::from_values({1, 1}, 7);
  options.user_noises = {{1, {{FieldElement(2, 7)}}},
                         {2, {{FieldElement(4, 7)}}}};
  options.collector_noise = CollectorNoise{{FieldVector::from_values({1, 2}, 7)}};
  return options;
}

}  // namespace

TEST_CASE("run_protocol reproduces the worked transcript") {
  const SystemParams params = make_params(7, 2, 3, 1);
  const Transcript t = run_protocol(params, 42, worked_example_inputs());

  REQUIRE(t.answers.size() == 3);
  CHECK(t.answers[0].value == FieldElement(2, 7));
  CHECK(t.answers[1].value == FieldElement(2, 7));
  CHECK(t.answers[2].value == FieldElement(1, 7));
  CHECK(t.statistic == FieldVector::from_values({1}, 7));
  CHECK(t.cost.download_symbols == 3);
  CHECK(t.cost.upload_symbols == 6);   // K*N*L
  CHECK(t.cost.query_symbols == 6);    // N*L*K
  CHECK(t.rate == Rational(1, 3));
  CHECK_NOTHROW(verify_transcript(t));
}

TEST_CASE("identical seeds give byte-identical transcripts") {
  const SystemParams params = make_params(11, 3, 4, 1);
  const Transcript a = run_protocol(params, 7);
  const Transcript b = run_protocol(params, 7);
  CHECK(transcript_to_string(a) == transcript_to_string(b));

  const Transcript c = run_protocol(params, 8);
  CHECK(transcript_to_string(a) != transcript_to_string(c));
}

TEST_CASE("random runs decode to the oracle and the rate is L/N") {
  const SystemParams params = make_params(11, 4, 5, 2);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Transcript t = run_protocol(params, seed);
    CHECK(t.statistic == compute_statistic_oracle(t.messages, t.f));
    CHECK(t.rate == Rational(2, 5));
    CHECK(t.cost.download_symbols == 5);
  }
}

TEST_CASE("rate is stored in lowest terms") {
  const SystemParams params = make_params(7, 2, 4, 1);  // L=2, N=4
  const Transcript t = run_protocol(params, 1);
  CHECK(t.rate.num == 1);
  CHECK(t.rate.den == 2);
}

TEST_CASE("queries are identical across transcripts with different messages") {
  const SystemParams params = make_params(7, 2, 3, 1);
  RunOptions a = worked_example_inputs();
  RunOptions b = worked_example_inputs();
  b.messages = {{1, FieldVector::from_values({6}, 7)},
                {2, FieldVector::from_values({0}, 7)}};
  const Transcript ta = run_protocol(params, 42, a);
  const Transcript tb = run_protocol(params, 42, b);
  CHECK(ta.queries == tb.queries);
  CHECK(ta.statistic != tb.statistic);
}

TEST_CASE("adding a user does not perturb existing users' draws") {
  const SystemParams small = make_params(11, 2, 4, 1);
  const SystemParams large = make_params(11, 3, 4, 1);
  const Transcript ts = run_protocol(small, 5);
  const Transcript tl = run_protocol(large, 5);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(ts.messages[k].symbols == tl.messages[k].symbols);
    CHECK(ts.user_noises[k].z == tl.user_noises[k].z);
  }
}

TEST_CASE("party views hold exactly their role's fields") {
  const SystemParams params = make_params(7, 2, 3, 1);
  const Transcript t = run_protocol(params, 42, worked_example_inputs());

  const auto server1 =
      std::get<ServerView>(extract_view(t, {Role::Kind::kServer, 1}));
  CHECK(server1.store.rows ==
        std::vector<FieldVector>{FieldVector::from_values({5, 2}, 7)});
  CHECK(server1.query.rows ==
        std::vector<FieldVector>{FieldVector::from_values({2, 3}, 7)});
  CHECK(server1.answer.value == FieldElement(2, 7));

  const auto user2 =
      std::get<UserView>(extract_view(t, {Role::Kind::kUser, 2}));
  CHECK(user2.message.symbols == FieldVector::from_values({5}, 7));
  REQUIRE(user2.uploads.size() == 3);
  CHECK(user2.uploads[0].symbols == FieldVector::from_values({2}, 7));

  const auto collector =
      std::get<CollectorView>(extract_view(t, {Role::Kind::kCollector}));
  CHECK(collector.f == t.f);
  CHECK(collector.statistic == t.statistic);
  CHECK(collector.answers.size() == 3);

  CHECK_THROWS_AS(extract_view(t, {Role::Kind::kServer, 4}), DimensionError);
  CHECK_THROWS_AS(extract_view(t, {Role::Kind::kUser, 0}), DimensionError);
}

TEST_CASE("view JSON never leaks another party's randomness") {
  const SystemParams params = make_params(7, 2, 3, 1);
  const Transcript t = run_protocol(params, 42);

  const auto server_json =
      view_to_json(extract_view(t, {Role::Kind::kServer, 1}));
  CHECK(server_json.contains("store"));
  CHECK(!server_json.contains("f"));
  CHECK(!server_json.contains("noise"));
  CHECK(!server_json.contains("collector_noise"));
  CHECK(!server_json.contains("statistic"));

  const auto user_json = view_to_json(extract_view(t, {Role::Kind::kUser, 1}));
  CHECK(user_json.contains("message"));
  CHECK(user_json.contains("noise"));
  CHECK(!user_json.contains("f"));
  CHECK(!user_json.contains("store"));
  CHECK(!user_json.contains("answers"));

  const auto collector_json =
      view_to_json(extract_view(t, {Role::Kind::kCollector}));
  CHECK(collector_json.contains("f"));
  CHECK(collector_json.contains("answers"));
  CHECK(!collector_json.contains("noise"));     // user masks
  CHECK(!collector_json.contains("store"));
  CHECK(!collector_json.contains("message"));
}

TEST_CASE("transcript JSON round-trips and re-verifies offline") {
  const SystemParams params = make_params(13, 3, 5, 2);
  const Transcript t = run_protocol(params, 123);

  const std::string text = transcript_to_string(t);
  const Transcript parsed = transcript_from_string(text);
  CHECK(transcript_to_string(parsed) == text);
  CHECK_NOTHROW(verify_transcript(parsed));
}

TEST_CASE("verify_transcript rejects tampering") {
  const SystemParams params = make_params(7, 2, 3, 1);
  const Transcript t = run_protocol(params, 42);

  auto j = transcript_to_json(t);
  j["answers"][0] = (j["answers"][0].get<std::uint64_t>() + 1) % 7;
  CHECK_THROWS_AS(verify_transcript(transcript_from_json(j)), Error);

  auto j2 = transcript_to_json(t);
  j2["statistic"][0] = (j2["statistic"][0].get<std::uint64_t>() + 1) % 7;
  CHECK_THROWS_AS(verify_transcript(transcript_from_json(j2)), Error);

  auto j3 = transcript_to_json(t);
  j3["cost"]["download_symbols"] = 99;
  CHECK_THROWS_AS(verify_transcript(transcript_from_json(j3)), Error);
}

TEST_CASE("sweep_rates reports capacity matches and infeasible reasons") {
  std::vector<GridPoint> grid;
  grid.push_back({0, 2, 3, 1});
  grid.push_back({0, 2, 5, 3});
  grid.push_back({0, 2, 3, 2});   // infeasible: E = N-1
  grid.push_back({3, 2, 3, 1});   // q too small for N+L=4

  const auto rows = sweep_rates(grid, 99);
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].feasible);
  CHECK(rows[0].measured_rate == Rational(1, 3));
  CHECK(rows[0].capacity == Rational(1, 3));
  CHECK(rows[0].match);

  CHECK(rows[1].feasible);
  CHECK(rows[1].measured_rate == Rational(1, 5));
  CHECK(rows[1].match);

  CHECK(!rows[2].feasible);
  CHECK(rows[2].measured_rate == Rational(0, 1));
  CHECK(rows[2].reason.find("E=2") != std::string::npos);

  CHECK(!rows[3].feasible);
  CHECK(rows[3].reason.find("field too small") != std::string::npos);
}

TEST_CASE("run_protocol propagates infeasible configurations") {
  CHECK_THROWS_AS(make_params(7, 2, 3, 2), InfeasibleConfigError);
}

TEST_CASE("run_protocol rejects fixed inputs that do not cover all users") {
  const SystemParams params = make_params(7, 2, 3, 1);
  RunOptions options;
  options.messages = {{1, FieldVector::from_values({3}, 7)}};
  CHECK_THROWS_AS(run_protocol(params, 1, options), DimensionError);
}
