#include "pedc/audit.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace pedc {

Rational DistributionTable::probability(const Outcome& outcome) const {
  if (total_ == 0) throw Error("probability from an empty table");
  auto it = counts_.find(outcome);
  return Rational(it == counts_.end() ? 0 : it->second, total_);
}

Rational statistical_distance(const DistributionTable& a,
                              const DistributionTable& b) {
  if (a.total() != b.total() || a.total() == 0) {
    throw Error("statistical distance needs equal nonzero enumeration sizes");
  }
  std::uint64_t abs_diff_sum = 0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  while (ia != a.counts().end() || ib != b.counts().end()) {
    if (ib == b.counts().end() ||
        (ia != a.counts().end() && ia->first < ib->first)) {
      abs_diff_sum += ia->second;
      ++ia;
    } else if (ia == a.counts().end() || ib->first < ia->first) {
      abs_diff_sum += ib->second;
      ++ib;
    } else {
      abs_diff_sum +=
          ia->second > ib->second ? ia->second - ib->second : ib->second - ia->second;
      ++ia;
      ++ib;
    }
  }
  return Rational(abs_diff_sum, 2 * a.total());
}

const char* constraint_id(Constraint c) {
  switch (c) {
    case Constraint::kP1:
      return "P1";
    case Constraint::kP2:
      return "P2";
    case Constraint::kP3:
      return "P3";
  }
  return "?";
}

namespace {

constexpr unsigned __int128 kSaturated = ~static_cast<unsigned __int128>(0);

unsigned __int128 pow_saturating(std::uint64_t base, std::uint64_t exp) {
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (acc > kSaturated / base) return kSaturated;
    acc *= base;
  }
  return acc;
}

void require_budget(unsigned __int128 predicted, const AuditBudget& budget,
                    const char* which) {
  if (predicted > budget.max_evaluations) {
    std::ostringstream msg;
    msg << which << " audit refused: predicted ";
    if (predicted == kSaturated) {
      msg << ">2^127";
    } else {
      msg << static_cast<double>(predicted);
    }
    msg << " protocol evaluations exceed the budget of "
        << budget.max_evaluations;
    throw BudgetExceededError(msg.str());
  }
}

// Runs fn once per assignment of `symbols` values from [0,q), in
// lexicographic order. symbols == 0 runs fn once on the empty vector.
template <typename Fn>
void for_each_assignment(std::size_t symbols, std::uint64_t q, Fn&& fn) {
  std::vector<std::uint64_t> values(symbols, 0);
  while (true) {
    fn(const_cast<const std::vector<std::uint64_t>&>(values));
    std::size_t i = symbols;
    while (i > 0) {
      --i;
      if (++values[i] < q) break;
      values[i] = 0;
      if (i == 0) return;
    }
    if (symbols == 0) return;
  }
}

std::vector<Message> messages_from(const SystemParams& params,
                                   const std::vector<std::uint64_t>& flat) {
  std::vector<Message> messages;
  messages.reserve(params.num_users);
  for (std::size_t k = 1; k <= params.num_users; ++k) {
    std::vector<std::uint64_t> symbols(
        flat.begin() + (k - 1) * params.message_len,
        flat.begin() + k * params.message_len);
    messages.push_back(
        Message{k, FieldVector::from_values(symbols, params.q)});
  }
  return messages;
}

std::vector<UserNoise> noises_from(const SystemParams& params,
                                   const std::vector<std::uint64_t>& flat) {
  std::vector<UserNoise> noises;
  noises.reserve(params.num_users);
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= params.num_users; ++k) {
    UserNoise noise{k, {}};
    for (std::size_t l = 0; l < params.message_len; ++l) {
      std::vector<FieldElement> row;
      row.reserve(params.collusion);
      for (std::size_t e = 0; e < params.collusion; ++e) {
        row.emplace_back(flat[idx++], params.q);
      }
      noise.z.push_back(std::move(row));
    }
    noises.push_back(std::move(noise));
  }
  return noises;
}

CollectorNoise zp_from(const SystemParams& params,
                       const std::vector<std::uint64_t>& flat) {
  CollectorNoise zp;
  for (std::size_t l = 0; l < params.message_len; ++l) {
    std::vector<std::uint64_t> row(flat.begin() + l * params.num_users,
                                   flat.begin() + (l + 1) * params.num_users);
    zp.rows.push_back(FieldVector::from_values(row, params.q));
  }
  return zp;
}

// Upload phase through the production encode/assemble path.
std::vector<ServerStore> build_stores(const SystemParams& params,
                                      const std::vector<Message>& messages,
                                      const std::vector<UserNoise>& noises) {
  std::vector<std::vector<ShareRow>> per_server(params.num_servers);
  for (std::size_t k = 0; k < messages.size(); ++k) {
    for (auto& row : encode_upload(params, messages[k], noises[k])) {
      per_server[row.server - 1].push_back(std::move(row));
    }
  }
  std::vector<ServerStore> stores;
  stores.reserve(params.num_servers);
  for (std::size_t n = 1; n <= params.num_servers; ++n) {
    stores.push_back(assemble_store(params, n, per_server[n - 1]));
  }
  return stores;
}

std::string format_symbols(const std::vector<std::uint64_t>& values) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ",";
    out << values[i];
  }
  out << "]";
  return out.str();
}

std::string format_vector(const FieldVector& v) {
  std::vector<std::uint64_t> values;
  values.reserve(v.size());
  for (const auto& e : v.elements()) values.push_back(e.value());
  return format_symbols(values);
}

// First outcome whose probability differs between the tables.
Witness make_witness(std::string left, std::string right,
                     const DistributionTable& a, const DistributionTable& b) {
  for (const auto& [outcome, count] : a.counts()) {
    (void)count;
    if (a.probability(outcome) != b.probability(outcome)) {
      return Witness{std::move(left), std::move(right), outcome,
                     a.probability(outcome), b.probability(outcome)};
    }
  }
  for (const auto& [outcome, count] : b.counts()) {
    (void)count;
    if (a.probability(outcome) != b.probability(outcome)) {
      return Witness{std::move(left), std::move(right), outcome,
                     a.probability(outcome), b.probability(outcome)};
    }
  }
  throw Error("witness requested for identical tables");
}

bool linearly_dependent(const Coefficients& f, const Coefficients& g) {
  // Two vectors are dependent iff one is a scalar multiple of the other.
  std::size_t pivot = f.size();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i].is_zero()) {
      pivot = i;
      break;
    }
  }
  if (pivot == f.size()) return true;  // f = 0
  const FieldElement lambda = g[pivot] * f[pivot].inv();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (g[i] != lambda * f[i]) return false;
  }
  return true;
}

}  // namespace

AuditReport audit_user_privacy_vs_servers(const SystemParams& params,
                                          const std::vector<std::size_t>& colluding,
                                          const AuditBudget& budget,
                                          const NoiseHooks& hooks) {
  if (colluding.size() != params.collusion) {
    throw DimensionError("colluding set must have exactly E=" +
                         std::to_string(params.collusion) + " servers");
  }
  std::vector<std::size_t> servers = colluding;
  std::sort(servers.begin(), servers.end());
  for (std::size_t i = 0; i < servers.size(); ++i) {
    if (servers[i] < 1 || servers[i] > params.num_servers ||
        (i > 0 && servers[i] == servers[i - 1])) {
      throw DimensionError("colluding set must list distinct servers in [1:N]");
    }
  }

  const std::size_t w_symbols = params.num_users * params.message_len;
  const std::size_t z_symbols =
      hooks.zero_user_noise ? 0
                            : params.num_users * params.message_len *
                                  params.collusion;
  require_budget(pow_saturating(params.q, w_symbols + z_symbols), budget, "P1");

  AuditReport report;
  report.constraint = Constraint::kP1;
  {
    std::ostringstream detail;
    detail << "colluding={";
    for (std::size_t i = 0; i < servers.size(); ++i) {
      if (i > 0) detail << ",";
      detail << servers[i];
    }
    detail << "}";
    report.detail = detail.str();
  }

  std::optional<DistributionTable> reference;
  std::string reference_label;
  report.max_distance = Rational(0, 1);

  for_each_assignment(w_symbols, params.q, [&](const auto& w_flat) {
    const auto messages = messages_from(params, w_flat);
    DistributionTable table;
    for_each_assignment(z_symbols, params.q, [&](const auto& z_flat) {
      const auto noises =
          noises_from(params, hooks.zero_user_noise
                                  ? std::vector<std::uint64_t>(
                                        params.num_users * params.message_len *
                                            params.collusion,
                                        0)
                                  : z_flat);
      const auto stores = build_stores(params, messages, noises);
      Outcome outcome;
      for (std::size_t n : servers) {
        for (const auto& row : stores[n - 1].rows) {
          for (const auto& e : row.elements()) outcome.push_back(e.value());
        }
      }
      table.add(std::move(outcome));
      ++report.enumerated;
    });

    if (!reference) {
      reference = std::move(table);
      reference_label = "W=" + format_symbols(w_flat);
      return;
    }
    const Rational d = statistical_distance(*reference, table);
    if (report.max_distance < d) report.max_distance = d;
    if (!d.is_zero() && !report.witness) {
      report.witness = make_witness(reference_label, "W=" + format_symbols(w_flat),
                                    *reference, table);
    }
  });

  report.outcome = report.max_distance.is_zero() ? AuditOutcome::kPass
                                                 : AuditOutcome::kFail;
  return report;
}

AuditReport audit_collector_privacy_vs_server(const SystemParams& params,
                                              std::size_t server,
                                              const Coefficients& f,
                                              const Coefficients& f_prime,
                                              const AuditBudget& budget,
                                              const NoiseHooks& hooks) {
  if (server < 1 || server > params.num_servers) {
    throw DimensionError("server index outside [1:N]");
  }
  if (f.size() != params.num_users || f_prime.size() != params.num_users ||
      f.modulus() != params.q || f_prime.modulus() != params.q) {
    throw DimensionError("coefficient vectors must hold K symbols of GF(q)");
  }
  if (linearly_dependent(f, f_prime)) {
    throw InvalidPairError("coefficient pair " + format_vector(f) + ", " +
                           format_vector(f_prime) + " is linearly dependent");
  }

  const std::size_t w_symbols = params.num_users * params.message_len;
  const std::size_t z_symbols =
      hooks.zero_user_noise
          ? 0
          : params.num_users * params.message_len * params.collusion;
  const std::size_t zp_symbols =
      hooks.zero_collector_noise ? 0
                                 : params.message_len * params.num_users;
  unsigned __int128 predicted =
      pow_saturating(params.q, w_symbols + z_symbols + zp_symbols);
  predicted = predicted > kSaturated / 2 ? kSaturated : predicted * 2;
  require_budget(predicted, budget, "P3");

  AuditReport report;
  report.constraint = Constraint::kP3;
  report.detail = "server=" + std::to_string(server) + " f=" + format_vector(f) +
                  " f'=" + format_vector(f_prime);
  report.max_distance = Rational(0, 1);

  const std::vector<std::uint64_t> zero_z(
      params.num_users * params.message_len * params.collusion, 0);
  const std::vector<std::uint64_t> zero_zp(
      params.message_len * params.num_users, 0);

  for_each_assignment(w_symbols, params.q, [&](const auto& w_flat) {
    const auto messages = messages_from(params, w_flat);
    for_each_assignment(z_symbols, params.q, [&](const auto& z_flat) {
      const auto noises =
          noises_from(params, hooks.zero_user_noise ? zero_z : z_flat);
      const auto stores = build_stores(params, messages, noises);
      const ServerStore& store = stores[server - 1];

      auto observe = [&](const Coefficients& coeffs) {
        DistributionTable table;
        for_each_assignment(zp_symbols, params.q, [&](const auto& zp_flat) {
          const auto zp = zp_from(
              params, hooks.zero_collector_noise ? zero_zp : zp_flat);
          const Query query = make_query(params, coeffs, zp, server);
          const Answer a = answer(store, query);
          Outcome outcome;
          for (const auto& row : query.rows) {
            for (const auto& e : row.elements()) outcome.push_back(e.value());
          }
          outcome.push_back(a.value.value());
          table.add(std::move(outcome));
          ++report.enumerated;
        });
        return table;
      };

      const DistributionTable under_f = observe(f);
      const DistributionTable under_f_prime = observe(f_prime);
      const Rational d = statistical_distance(under_f, under_f_prime);
      if (report.max_distance < d) report.max_distance = d;
      if (!d.is_zero() && !report.witness) {
        report.witness = make_witness(
            "f=" + format_vector(f) + " with W=" + format_symbols(w_flat),
            "f'=" + format_vector(f_prime) + " with W=" + format_symbols(w_flat),
            under_f, under_f_prime);
      }
    });
  });

  report.outcome = report.max_distance.is_zero() ? AuditOutcome::kPass
                                                 : AuditOutcome::kFail;
  return report;
}

AuditReport audit_user_privacy_vs_collector(const SystemParams& params,
                                            const Coefficients& f,
                                            const AuditBudget& budget,
                                            const NoiseHooks& hooks) {
  if (f.size() != params.num_users || f.modulus() != params.q) {
    throw DimensionError("coefficients must hold K symbols of GF(q)");
  }
  bool all_zero = true;
  for (const auto& e : f.elements()) all_zero = all_zero && e.is_zero();
  if (all_zero) {
    throw InvalidPairError(
        "P2 audit requires nonzero coefficients: the guarantee is claimed "
        "only for f extendable to a basis");
  }

  const std::size_t w_symbols = params.num_users * params.message_len;
  const std::size_t z_symbols =
      hooks.zero_user_noise
          ? 0
          : params.num_users * params.message_len * params.collusion;
  const std::size_t zp_symbols =
      hooks.zero_collector_noise ? 0
                                 : params.message_len * params.num_users;
  require_budget(pow_saturating(params.q, w_symbols + z_symbols + zp_symbols),
                 budget, "P2");

  AuditReport report;
  report.constraint = Constraint::kP2;
  report.detail = "f=" + format_vector(f);
  report.max_distance = Rational(0, 1);

  const std::vector<std::uint64_t> zero_z(
      params.num_users * params.message_len * params.collusion, 0);
  const std::vector<std::uint64_t> zero_zp(
      params.message_len * params.num_users, 0);

  // Group representative tables keyed by the statistic value.
  std::map<Outcome, std::pair<DistributionTable, std::string>> groups;

  for_each_assignment(w_symbols, params.q, [&](const auto& w_flat) {
    const auto messages = messages_from(params, w_flat);

    const Statistic statistic = compute_statistic_oracle(messages, f);
    Outcome group_key;
    for (const auto& e : statistic.elements()) {
      group_key.push_back(e.value());
    }

    // The collector's view: its own randomness plus all answers. Queries
    // are a deterministic function of (f, Z') and add nothing.
    DistributionTable table;
    for_each_assignment(z_symbols, params.q, [&](const auto& z_flat) {
      const auto noises =
          noises_from(params, hooks.zero_user_noise ? zero_z : z_flat);
      const auto stores = build_stores(params, messages, noises);
      for_each_assignment(zp_symbols, params.q, [&](const auto& zp_flat) {
        const auto& zp_values =
            hooks.zero_collector_noise ? zero_zp : zp_flat;
        const auto zp = zp_from(params, zp_values);
        Outcome outcome = zp_values;
        for (std::size_t n = 1; n <= params.num_servers; ++n) {
          const Query query = make_query(params, f, zp, n);
          outcome.push_back(answer(stores[n - 1], query).value.value());
        }
        table.add(std::move(outcome));
        ++report.enumerated;
      });
    });

    auto it = groups.find(group_key);
    if (it == groups.end()) {
      groups.emplace(group_key, std::make_pair(std::move(table),
                                               "W=" + format_symbols(w_flat)));
      return;
    }

    const Rational d = statistical_distance(it->second.first, table);
    if (report.max_distance < d) report.max_distance = d;
    if (!d.is_zero() && !report.witness) {
      report.witness = make_witness(
          it->second.second + " (statistic " + format_symbols(group_key) + ")",
          "W=" + format_symbols(w_flat) + " (same statistic)",
          it->second.first, table);
    }
  });

  report.outcome = report.max_distance.is_zero() ? AuditOutcome::kPass
                                                 : AuditOutcome::kFail;
  return report;
}

namespace {

// All size-E subsets of [1:N] in lexicographic order.
std::vector<std::vector<std::size_t>> subsets_of_servers(std::size_t n,
                                                         std::size_t e) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  auto recurse = [&](auto&& self, std::size_t next) -> void {
    if (current.size() == e) {
      out.push_back(current);
      return;
    }
    for (std::size_t v = next; v <= n; ++v) {
      current.push_back(v);
      self(self, v + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 1);
  return out;
}

// Big-endian base-q digits of v, fixed width.
std::vector<std::uint64_t> digits_of(unsigned __int128 v, std::size_t width,
                                     std::uint64_t q) {
  std::vector<std::uint64_t> digits(width, 0);
  for (std::size_t i = width; i > 0 && v > 0; --i) {
    digits[i - 1] = static_cast<std::uint64_t>(v % q);
    v /= q;
  }
  return digits;
}

// Deterministic nonzero coefficient choices: unit vectors, the all-ones
// vector, then counting through nonzero vectors until `count` collected.
std::vector<Coefficients> default_coefficients(const SystemParams& params,
                                               std::size_t count) {
  const unsigned __int128 space =
      pow_saturating(params.q, params.num_users) - 1;  // nonzero vectors
  std::vector<Coefficients> out;
  auto push_unique = [&](const FieldVector& v) {
    if (out.size() >= count) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (std::size_t k = 0; k < params.num_users && out.size() < count; ++k) {
    std::vector<std::uint64_t> values(params.num_users, 0);
    values[k] = 1;
    push_unique(FieldVector::from_values(values, params.q));
  }
  push_unique(FieldVector::from_values(
      std::vector<std::uint64_t>(params.num_users, 1), params.q));
  for (unsigned __int128 v = 1; v <= space && out.size() < count; ++v) {
    push_unique(FieldVector::from_values(
        digits_of(v, params.num_users, params.q), params.q));
  }
  return out;
}

// Representatives of distinct projective points (first nonzero symbol
// normalized to 1); any two of them are linearly independent.
std::vector<Coefficients> projective_points(const SystemParams& params,
                                            std::size_t limit) {
  std::vector<Coefficients> out;
  const std::size_t width = params.num_users;
  for (std::size_t lead = width; lead > 0 && out.size() < limit; --lead) {
    // 1 at position lead-1, zeros before it, free tail after it.
    const std::size_t tail = width - lead;
    const unsigned __int128 tail_space = pow_saturating(params.q, tail);
    for (unsigned __int128 v = 0; v < tail_space && out.size() < limit; ++v) {
      std::vector<std::uint64_t> values(width, 0);
      values[lead - 1] = 1;
      const auto tail_digits = digits_of(v, tail, params.q);
      std::copy(tail_digits.begin(), tail_digits.end(),
                values.begin() + lead);
      out.push_back(FieldVector::from_values(values, params.q));
    }
  }
  return out;
}

}  // namespace

std::vector<AuditReport> audit_all(const SystemParams& params,
                                   const AuditBudget& budget,
                                   const AuditAllOptions& options) {
  std::vector<AuditReport> reports;

  auto run = [&](Constraint constraint, const std::string& detail,
                 auto&& body) {
    try {
      reports.push_back(body());
    } catch (const BudgetExceededError& e) {
      AuditReport refused;
      refused.constraint = constraint;
      refused.outcome = AuditOutcome::kRefused;
      refused.detail = detail + ": " + e.what();
      reports.push_back(std::move(refused));
    }
  };

  if (options.run_p1) {
    for (const auto& subset : subsets_of_servers(params.num_servers,
                                                 params.collusion)) {
      run(Constraint::kP1, "P1", [&] {
        return audit_user_privacy_vs_servers(params, subset, budget);
      });
    }
  }

  if (options.run_p2) {
    for (const auto& f : default_coefficients(params,
                                              options.p2_coefficient_choices)) {
      run(Constraint::kP2, "P2 f=" + format_vector(f), [&] {
        return audit_user_privacy_vs_collector(params, f, budget);
      });
    }
  }

  if (!options.run_p3) return reports;

  // Enough projective points for the requested pair count.
  std::size_t want_points = 2;
  while (want_points * (want_points - 1) / 2 < options.p3_pairs_per_server) {
    ++want_points;
  }
  const auto points = projective_points(params, want_points);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < points.size() && pairs.size() < options.p3_pairs_per_server; ++i) {
    for (std::size_t j = i + 1;
         j < points.size() && pairs.size() < options.p3_pairs_per_server; ++j) {
      pairs.emplace_back(i, j);
    }
  }

  if (pairs.empty()) {
    // K=1: no linearly independent pairs exist, the constraint is vacuous.
    AuditReport vacuous;
    vacuous.constraint = Constraint::kP3;
    vacuous.outcome = AuditOutcome::kPass;
    vacuous.max_distance = Rational(0, 1);
    vacuous.detail =
        "vacuously holds: no linearly independent coefficient pairs exist "
        "for K=" + std::to_string(params.num_users);
    reports.push_back(std::move(vacuous));
  } else {
    for (std::size_t n = 1; n <= params.num_servers; ++n) {
      for (const auto& [i, j] : pairs) {
        run(Constraint::kP3, "P3 server=" + std::to_string(n), [&] {
          return audit_collector_privacy_vs_server(params, n, points[i],
                                                   points[j], budget);
        });
      }
    }
  }

  return reports;
}

nlohmann::ordered_json report_to_json(const AuditReport& report) {
  nlohmann::ordered_json j;
  j["constraint"] = constraint_id(report.constraint);
  switch (report.outcome) {
    case AuditOutcome::kPass:
      j["outcome"] = "pass";
      break;
    case AuditOutcome::kFail:
      j["outcome"] = "fail";
      break;
    case AuditOutcome::kRefused:
      j["outcome"] = "refused";
      break;
  }
  j["distance"] = {{"num", report.max_distance.num},
                   {"den", report.max_distance.den}};
  j["enumerated"] = report.enumerated;
  j["detail"] = report.detail;
  if (report.witness) {
    nlohmann::ordered_json w;
    w["left"] = report.witness->left;
    w["right"] = report.witness->right;
    w["outcome"] = report.witness->outcome;
    w["p_left"] = {{"num", report.witness->p_left.num},
                   {"den", report.witness->p_left.den}};
    w["p_right"] = {{"num", report.witness->p_right.num},
                    {"den", report.witness->p_right.den}};
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

}  // namespace pedc
