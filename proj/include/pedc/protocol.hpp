#pragma once

#include <cstddef>
#include <vector>

#include "pedc/params.hpp"

namespace pedc {

// W_k: one user's L message symbols.
struct Message {
  std::size_t user;
  FieldVector symbols;  // length L
};

// Z^k: the L x E mask a user draws privately before uploading. Row l
// holds Z_{l,1..E}; rows are empty when E = 0.
struct UserNoise {
  std::size_t user;
  std::vector<std::vector<FieldElement>> z;
};

// D_{k,n}: what user k deposits at server n (symbols l = 1..L).
struct ShareRow {
  std::size_t user;
  std::size_t server;
  FieldVector symbols;

  bool operator==(const ShareRow&) const = default;
};

// D_n: the L x K block server n ends the upload phase with;
// rows[l-1][k-1] is user k's l-th masked symbol.
struct ServerStore {
  std::size_t server;
  std::vector<FieldVector> rows;

  bool operator==(const ServerStore&) const = default;
};

// f: the collector's private combination coefficients, length K.
using Coefficients = FieldVector;

// Z': L blinding vectors of length K, drawn by the collector.
struct CollectorNoise {
  std::vector<FieldVector> rows;

  bool operator==(const CollectorNoise&) const = default;
};

// Q_n^f: row l is (Delta_n/(l+alpha_n)) * (f + (l+alpha_n) Z'_l).
struct Query {
  std::size_t server;
  std::vector<FieldVector> rows;

  bool operator==(const Query&) const = default;
};

// A_n^f: the single symbol a server returns.
struct Answer {
  std::size_t server;
  FieldElement value;

  bool operator==(const Answer&) const = default;
};

// The decoded combination (W^1·f, ..., W^L·f).
using Statistic = FieldVector;

// Upload-phase encoding: D_{k,n}^l = W_k^l + sum_e (l+alpha_n)^e Z_{le}^k.
// Pure in (message, noise); re-encoding identical inputs yields identical
// shares. Returns one row per server, in server order.
std::vector<ShareRow> encode_upload(const SystemParams& params,
                                    const Message& message,
                                    const UserNoise& noise);

// Collects the K per-user rows addressed to one server into its store.
// Requires exactly one row from each user k in [1:K].
ServerStore assemble_store(const SystemParams& params, std::size_t server,
                           const std::vector<ShareRow>& shares);

// Computation-phase query. Takes no message input: queries cannot depend
// on user data by construction.
Query make_query(const SystemParams& params, const Coefficients& f,
                 const CollectorNoise& zp, std::size_t server);

// A_n^f = D_n · Q_n^f, a single field symbol.
Answer answer(const ServerStore& store, const Query& query);

// Scales answer n by 1/Delta_n, solves the reconstruction system and
// returns the first L solution entries. The trailing E+1 interference
// entries are discarded; decoding is exact (zero error).
Statistic decode(const SystemParams& params, const std::vector<Answer>& answers,
                 const Coefficients& f, const CollectorNoise& zp);

struct DecodeResult {
  Statistic statistic;
  std::vector<FieldElement> interference;  // I_0..I_E, server-independent
};

// Full solution vector, interference included. Test and audit surface
// only; the interference symbols stay out of the public Statistic.
DecodeResult decode_with_interference(const SystemParams& params,
                                      const std::vector<Answer>& answers);

// Ground truth sum_k f_k W_k computed directly from the messages,
// bypassing the protocol. Reference for every end-to-end check.
Statistic compute_statistic_oracle(const std::vector<Message>& messages,
                                   const Coefficients& f);

}  // namespace pedc
