#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "flmpc/functionality.hpp"
#include "flmpc/secure_agg.hpp"
#include "flmpc/value.hpp"
#include "flmpc/view.hpp"

namespace flmpc {

/// The one training program currently defined: a single exact gradient step
/// of squared loss on a linear model.
inline constexpr const char* kProgramSqLinearStep = "sq-linear-step";

enum class Variant { Plain, Oracle, Masked };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct FlConfig {
    std::uint32_t modulus = 17;
    std::size_t dimension = 1;
    int clients = 2;
    std::uint32_t rounds = 1;
    Rational learning_rate = Rational(1, 4);
    std::uint32_t scale = 1;
    std::uint64_t selection_seed = 1;
    std::size_t eligibility_min = 1;
    RationalVector initial_model;
    std::string program = kProgramSqLinearStep;

    int arity() const { return clients + 1; }

    /// Initial model padded with zeros to the configured dimension.
    RationalVector model_or_zero() const;

    void validate() const;
};

struct CandidateClient {
    int id = 0;
    ClientDataset dataset;
};

/// Seeded deterministic choice of `count` eligible clients: the eligible
/// pool is sorted by id, Fisher-Yates-shuffled under SplitMix64(seed), and
/// the first `count` ids are returned in shuffle order.
std::vector<int> select_clients(const std::vector<CandidateClient>& pool, int count,
                                std::size_t eligibility_min, std::uint64_t seed);

SysParam make_sysparam(const FlConfig& config, const RationalVector& model,
                       std::uint32_t round);

/// Delivers an identical sysparam entry to every selected client view and
/// logs the send on the server view (the last element of `views`).
/// `selected` holds 1-based party indices of this round's clients.
void broadcast_sysparam(const SysParam& sysparam, const std::vector<int>& selected,
                        std::vector<PartyView>& views);

/// One exact gradient step over the client's examples: g = sum_k
/// 2(w.x_k - y_k) x_k in rational arithmetic, scaled, rounded half away
/// from zero, and reduced centered into Z_q. Throws OverflowError when a
/// scaled component reaches (q-1)/2, i.e. the modulus is too small.
FieldVector client_update(const ClientDataset& dataset, const SysParam& sysparam);

/// Componentwise sum mod q of the client updates.
FieldVector aggregate_plain(const std::vector<FieldVector>& updates);

/// w' = w - lr * (decode(aggregate)/scale) / client_count, exact rationals.
RationalVector model_update(const RationalVector& model, const FieldVector& aggregate,
                            int client_count, const Rational& learning_rate,
                            std::uint32_t scale, std::uint32_t modulus);

/// The ideal per-round functionality: inputs are the client datasets plus
/// the server's current model; client outputs are acks and the server's
/// output is the updated model, computed exactly as the protocol pipeline
/// computes it.
MAryFunctionality round_functionality(const FlConfig& config);

/// n copies of the round functionality under server-model threading;
/// evaluating this on (datasets..., initial model) is the ideal counterpart
/// of a full protocol run.
MAryFunctionality composed_fl_functionality(const FlConfig& config);

/// Supplies the pairwise mask set for each round of a masked run.
using MaskProvider = std::function<PairwiseMaskSet(std::uint32_t round)>;

MaskProvider seeded_mask_provider(const FlConfig& config, std::uint64_t seed);

struct FlRunOutput {
    RationalVector final_model;
    Trajectory trajectory;
};

/// Executes the full multi-round protocol: selection, broadcast, client
/// computation, aggregation (per variant) and model update, recording every
/// party's view in `views`. On error the exception propagates with `views`
/// preserved up to the failure point, which is why views are an out
/// parameter rather than a return value.
FlRunOutput run_fl(const FlConfig& config, const std::vector<CandidateClient>& pool,
                   Variant variant, const MaskProvider& masks,
                   std::vector<PartyView>& views);

} // namespace flmpc
