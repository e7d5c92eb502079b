#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flmpc/field.hpp"
#include "flmpc/rational.hpp"

namespace flmpc {

/// The "no input" / "no payload" symbol.
struct Bottom {
    friend bool operator==(const Bottom&, const Bottom&) { return true; }
};

/// Bare acknowledgment, the client-side output of an aggregation round.
struct Ack {
    friend bool operator==(const Ack&, const Ack&) { return true; }
};

struct Example {
    RationalVector features;
    Rational label;

    friend bool operator==(const Example& a, const Example& b) {
        return a.features == b.features && a.label == b.label;
    }
};

/// A client's local training data. Owner is the client identifier from the
/// candidate pool, not the protocol party index.
struct ClientDataset {
    int owner = 0;
    std::vector<Example> examples;

    friend bool operator==(const ClientDataset& a, const ClientDataset& b) {
        return a.owner == b.owner && a.examples == b.examples;
    }
};

/// Broadcast system parameter: current model weights plus the training
/// program tag, with the round bookkeeping every client must agree on.
struct SysParam {
    RationalVector weights;
    std::string program;
    std::uint32_t round = 0;
    std::uint32_t modulus = 0;
    std::uint32_t scale = 1;

    friend bool operator==(const SysParam& a, const SysParam& b) {
        return a.weights == b.weights && a.program == b.program && a.round == b.round &&
               a.modulus == b.modulus && a.scale == b.scale;
    }
};

/// One pairwise pad: the vector shared by clients a and b (a < b). Client a
/// adds it to its update, client b subtracts it.
struct MaskShare {
    int low = 0;
    int high = 0;
    FieldVector pad;

    friend bool operator==(const MaskShare& a, const MaskShare& b) {
        return a.low == b.low && a.high == b.high && a.pad == b.pad;
    }
};

using MaskList = std::vector<MaskShare>;

/// Model weights after each round, in round order.
struct Trajectory {
    std::vector<RationalVector> models;

    friend bool operator==(const Trajectory& a, const Trajectory& b) {
        return a.models == b.models;
    }
};

/// Every payload that can cross a party boundary or land in a view entry.
using Value = std::variant<Bottom, Ack, FieldVector, RationalVector, ClientDataset,
                           SysParam, MaskList, Trajectory>;

std::string canon(const Value& v);
std::string canon_values(const std::vector<Value>& vs);

/// Inverse of canon(); accepts exactly the canonical encoding and throws
/// TranscriptError on anything else. canon(parse_value_canon(s)) == s.
Value parse_value_canon(const std::string& text);

/// Length-prefixed wrapper (netstring): "<len>:<payload>,". Concatenations
/// of netstrings parse uniquely, which is what makes serialized views usable
/// as exact distribution keys.
inline std::string netstring(const std::string& payload) {
    return std::to_string(payload.size()) + ":" + payload + ",";
}

} // namespace flmpc
