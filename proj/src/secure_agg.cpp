#include "flmpc/secure_agg.hpp"

#include "flmpc/errors.hpp"
#include "flmpc/prng.hpp"

namespace flmpc {

PairwiseMaskSet::PairwiseMaskSet(std::uint32_t q, std::size_t dim, int num_clients)
    : q_(q), dim_(dim), num_clients_(num_clients) {
    if (num_clients < 1) throw DomainError("mask set needs at least one client");
    pads_.assign(pairs(num_clients).size(), FieldVector(q, dim));
}

std::vector<std::pair<int, int>> PairwiseMaskSet::pairs(int num_clients) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= num_clients; ++i)
        for (int j = i + 1; j <= num_clients; ++j) out.emplace_back(i, j);
    return out;
}

std::uint64_t PairwiseMaskSet::domain_size(std::uint32_t q, std::size_t dim, int num_clients) {
    std::uint64_t size = 1;
    std::size_t cells = pairs(num_clients).size() * dim;
    for (std::size_t i = 0; i < cells; ++i) {
        if (size > UINT64_MAX / q) throw BudgetError("mask domain exceeds 64 bits");
        size *= q;
    }
    return size;
}

PairwiseMaskSet PairwiseMaskSet::from_index(std::uint32_t q, std::size_t dim, int num_clients,
                                            std::uint64_t index) {
    if (index >= domain_size(q, dim, num_clients))
        throw DomainError("mask index outside enumeration domain");
    PairwiseMaskSet set(q, dim, num_clients);
    auto ps = pairs(num_clients);
    // base-q digits, first pair / first component most significant
    for (std::size_t slot = ps.size(); slot-- > 0;) {
        FieldVector pad(q, dim);
        for (std::size_t c = dim; c-- > 0;) {
            pad.set(c, (std::uint32_t)(index % q));
            index /= q;
        }
        set.pads_[slot] = pad;
    }
    return set;
}

PairwiseMaskSet PairwiseMaskSet::from_seed(std::uint32_t q, std::size_t dim, int num_clients,
                                           std::uint64_t seed, std::uint32_t round) {
    PairwiseMaskSet set(q, dim, num_clients);
    for (auto [i, j] : pairs(num_clients)) {
        SplitMix64 stream(derive_seed(seed, round, (std::uint64_t)i, (std::uint64_t)j));
        FieldVector pad(q, dim);
        for (std::size_t c = 0; c < dim; ++c) pad.set(c, (std::uint32_t)stream.next_below(q));
        set.set_pad(i, j, std::move(pad));
    }
    return set;
}

std::size_t PairwiseMaskSet::pair_slot(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > num_clients_ || i == j)
        throw DomainError("no pad for pair {" + std::to_string(i) + "," + std::to_string(j) + "}");
    // slot of (i, j) in lexicographic pair order
    std::size_t before = (std::size_t)(i - 1) * num_clients_ - (std::size_t)i * (i - 1) / 2;
    return before + (std::size_t)(j - i - 1);
}

const FieldVector& PairwiseMaskSet::pad(int i, int j) const { return pads_[pair_slot(i, j)]; }

void PairwiseMaskSet::set_pad(int i, int j, FieldVector pad) {
    if (pad.modulus() != q_ || pad.dim() != dim_)
        throw DomainError("pad shape does not match the mask set");
    pads_[pair_slot(i, j)] = std::move(pad);
}

MaskList PairwiseMaskSet::masks_for_client(int client) const {
    if (client < 1 || client > num_clients_)
        throw DomainError("client index " + std::to_string(client) + " out of range");
    MaskList out;
    for (auto [i, j] : pairs(num_clients_))
        if (i == client || j == client) out.push_back(MaskShare{i, j, pad(i, j)});
    return out;
}

FieldVector mask_update(const FieldVector& x, const PairwiseMaskSet& masks, int client) {
    if (x.modulus() != masks.modulus() || x.dim() != masks.dim())
        throw DomainError("update shape does not match the mask set");
    FieldVector y = x;
    for (int other = 1; other <= masks.num_clients(); ++other) {
        if (other == client) continue;
        if (other > client)
            y += masks.pad(client, other);
        else
            y -= masks.pad(other, client);
    }
    return y;
}

FieldVector unmask_aggregate(const std::vector<FieldVector>& masked, int expected_clients) {
    if ((int)masked.size() != expected_clients)
        throw IncompleteRoundError("expected " + std::to_string(expected_clients) +
                                   " masked updates, got " + std::to_string(masked.size()));
    FieldVector total = masked.front();
    for (std::size_t i = 1; i < masked.size(); ++i) total += masked[i];
    return total;
}

FieldVector secure_agg_round(const std::vector<FieldVector>& inputs,
                             const PairwiseMaskSet& masks, std::vector<PartyView>& views,
                             std::uint32_t round) {
    const int clients = masks.num_clients();
    if ((int)inputs.size() != clients)
        throw IncompleteRoundError("expected " + std::to_string(clients) + " inputs, got " +
                                   std::to_string(inputs.size()));
    if ((int)views.size() != clients + 1)
        throw ArityError("masked round needs one view per client plus the server");

    std::vector<FieldVector> masked;
    masked.reserve(inputs.size());
    for (int i = 1; i <= clients; ++i) {
        views[i - 1].append(round, EntryKind::Randomness, masks.masks_for_client(i));
        FieldVector y = mask_update(inputs[i - 1], masks, i);
        views[i - 1].append(round, EntryKind::MessageOut, y);
        masked.push_back(std::move(y));
    }

    PartyView& server = views.back();
    for (const auto& y : masked) server.append(round, EntryKind::MessageIn, y);
    return unmask_aggregate(masked, clients);
}

} // namespace flmpc
