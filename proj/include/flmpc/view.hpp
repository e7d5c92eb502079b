#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flmpc/value.hpp"

namespace flmpc {

enum class EntryKind {
    Input,
    Randomness,
    SysParamIn,
    MessageIn,
    MessageOut,
    OracleQuery,
    OracleAnswer,
    Output,
};

const char* entry_kind_name(EntryKind k);
EntryKind entry_kind_from_name(const std::string& name);

struct ViewEntry {
    std::uint32_t round = 0;
    std::uint64_t seq = 0;
    EntryKind kind = EntryKind::Input;
    Value payload;

    std::string canon() const;

    friend bool operator==(const ViewEntry& a, const ViewEntry& b) {
        return a.round == b.round && a.seq == b.seq && a.kind == b.kind &&
               a.payload == b.payload;
    }
};

/// Append-only per-party transcript. There is deliberately no way to remove
/// or rewrite an entry; sequence numbers are assigned on append and strictly
/// increase.
class PartyView {
public:
    PartyView() = default;
    explicit PartyView(int party) : party_(party) {}

    int party() const { return party_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const ViewEntry& entry(std::size_t i) const { return entries_.at(i); }
    const std::vector<ViewEntry>& entries() const { return entries_; }

    const ViewEntry& append(std::uint32_t round, EntryKind kind, Value payload);

    /// Canonical serialization of the whole view; injective across distinct
    /// entry sequences.
    std::string canon() const;

    friend bool operator==(const PartyView& a, const PartyView& b) {
        return a.party_ == b.party_ && a.entries_ == b.entries_;
    }

private:
    int party_ = 0;
    std::vector<ViewEntry> entries_;
};

} // namespace flmpc
