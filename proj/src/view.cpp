#include "flmpc/view.hpp"

#include <sstream>

#include "flmpc/errors.hpp"

namespace flmpc {

const char* entry_kind_name(EntryKind k) {
    switch (k) {
        case EntryKind::Input: return "input";
        case EntryKind::Randomness: return "randomness";
        case EntryKind::SysParamIn: return "sysparam";
        case EntryKind::MessageIn: return "msg-in";
        case EntryKind::MessageOut: return "msg-out";
        case EntryKind::OracleQuery: return "oracle-query";
        case EntryKind::OracleAnswer: return "oracle-answer";
        case EntryKind::Output: return "output";
    }
    return "?";
}

EntryKind entry_kind_from_name(const std::string& name) {
    for (EntryKind k : {EntryKind::Input, EntryKind::Randomness, EntryKind::SysParamIn,
                        EntryKind::MessageIn, EntryKind::MessageOut, EntryKind::OracleQuery,
                        EntryKind::OracleAnswer, EntryKind::Output}) {
        if (name == entry_kind_name(k)) return k;
    }
    throw TranscriptError("unknown view entry kind '" + name + "'");
}

std::string ViewEntry::canon() const {
    std::ostringstream out;
    out << round << ' ' << seq << ' ' << entry_kind_name(kind) << ' ' << flmpc::canon(payload);
    return netstring(out.str());
}

const ViewEntry& PartyView::append(std::uint32_t round, EntryKind kind, Value payload) {
    ViewEntry e;
    e.round = round;
    e.seq = entries_.size();
    e.kind = kind;
    e.payload = std::move(payload);
    entries_.push_back(std::move(e));
    return entries_.back();
}

std::string PartyView::canon() const {
    std::string out = netstring("view " + std::to_string(party_) + " " +
                                std::to_string(entries_.size()));
    for (const auto& e : entries_) out += e.canon();
    return out;
}

} // namespace flmpc
