#pragma once

#include <string>
#include <vector>

#include "flmpc/view.hpp"

namespace flmpc {

struct TranscriptData {
    std::string digest;
    std::vector<PartyView> views;
};

std::string render_transcript(const std::vector<PartyView>& views, const std::string& digest);

/// Line-oriented persistence of party views: one entry per line, ordered by
/// (party, sequence number). Reading back reproduces views whose canonical
/// serialization is byte-identical to the originals.
void write_transcript(const std::string& path, const std::vector<PartyView>& views,
                      const std::string& digest);

TranscriptData parse_transcript(const std::string& text, const std::string& origin);
TranscriptData read_transcript(const std::string& path);

} // namespace flmpc
