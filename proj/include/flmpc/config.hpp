#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flmpc/fl.hpp"
#include "flmpc/simulation.hpp"

namespace flmpc {

/// Everything a harness run needs, parsed from the key = value text format
/// documented in docs/formats.md.
struct ExperimentConfig {
    FlConfig fl;
    Variant variant = Variant::Plain;
    std::vector<CorruptionSet> corruption_sets;
    CheckMode mode = CheckMode::Deterministic;
    std::uint64_t budget = 10000000;
    std::uint64_t sampling = 0; // >0 enables the informational sampled mode
    std::string data_path;

    void validate() const;

    /// Normalized "key = value" lines in fixed key order; what the digest
    /// covers and what two equivalent configs share byte for byte.
    std::string canonical_text() const;

    /// FNV-1a 64 over the canonical text, 16 hex digits. Binds transcripts
    /// to the config that produced them.
    std::string digest() const;

    static ExperimentConfig parse(const std::string& text, const std::string& origin);
    static ExperimentConfig load(const std::string& path);
};

std::uint64_t fnv1a64(const std::string& text);

std::vector<CandidateClient> parse_datasets(const std::string& text, const std::string& origin);
std::vector<CandidateClient> load_datasets(const std::string& path);

void write_model_file(const std::string& path, const RationalVector& model);
RationalVector read_model_file(const std::string& path);

} // namespace flmpc
