#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "flmpc/field.hpp"
#include "flmpc/value.hpp"
#include "flmpc/view.hpp"

namespace flmpc {

/// One pad vector per unordered client pair {i, j}, i < j, over Z_q^d.
/// Client i adds the pad into its masked update, client j subtracts it, so
/// every pad cancels from the server's sum. Pads never involve the server.
class PairwiseMaskSet {
public:
    PairwiseMaskSet(std::uint32_t q, std::size_t dim, int num_clients);

    std::uint32_t modulus() const { return q_; }
    std::size_t dim() const { return dim_; }
    int num_clients() const { return num_clients_; }

    /// Client pairs in lexicographic order: (1,2), (1,3), ..., (2,3), ...
    static std::vector<std::pair<int, int>> pairs(int num_clients);

    /// q^(d * #pairs): the number of distinct mask assignments.
    static std::uint64_t domain_size(std::uint32_t q, std::size_t dim, int num_clients);

    /// Decodes an enumeration index into a mask assignment. The index is
    /// read base q, first pair / first component most significant, matching
    /// the documented lexicographic order.
    static PairwiseMaskSet from_index(std::uint32_t q, std::size_t dim, int num_clients,
                                      std::uint64_t index);

    /// Pads derived from an experiment seed, one SplitMix64 stream per
    /// (round, pair). Reproducible but not exactly uniform; exactness
    /// claims always use from_index enumeration instead.
    static PairwiseMaskSet from_seed(std::uint32_t q, std::size_t dim, int num_clients,
                                     std::uint64_t seed, std::uint32_t round);

    const FieldVector& pad(int i, int j) const;
    void set_pad(int i, int j, FieldVector pad);

    /// All pads known to one client, sorted by pair — the content of that
    /// client's randomness tape entry.
    MaskList masks_for_client(int client) const;

private:
    std::size_t pair_slot(int i, int j) const;

    std::uint32_t q_;
    std::size_t dim_;
    int num_clients_;
    std::vector<FieldVector> pads_;
};

/// y_i = x_i + sum_{j>i} p_{ij} - sum_{j<i} p_{ji} over Z_q.
FieldVector mask_update(const FieldVector& x, const PairwiseMaskSet& masks, int client);

/// Componentwise sum of the masked updates; the pads cancel. Refuses an
/// incomplete set because the pads would not cancel.
FieldVector unmask_aggregate(const std::vector<FieldVector>& masked, int expected_clients);

/// Runs the masked aggregation step over the given party views: each client
/// view gains a randomness entry (its pads) and its masked update as a
/// message out; the server view gains one message in per masked update and
/// never sees a plain input. Returns the aggregate.
FieldVector secure_agg_round(const std::vector<FieldVector>& inputs,
                             const PairwiseMaskSet& masks, std::vector<PartyView>& views,
                             std::uint32_t round);

} // namespace flmpc
