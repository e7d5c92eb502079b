#include "flmpc/transcript.hpp"

#include <fstream>
#include <sstream>

#include "flmpc/errors.hpp"

namespace flmpc {

std::string render_transcript(const std::vector<PartyView>& views, const std::string& digest) {
    std::ostringstream out;
    out << "flmpc-transcript 1\n";
    out << "digest " << digest << "\n";
    out << "parties " << views.size() << "\n";
    for (const auto& view : views) {
        for (const auto& e : view.entries()) {
            out << "entry " << view.party() << ' ' << e.seq << ' ' << e.round << ' '
                << entry_kind_name(e.kind) << ' ' << canon(e.payload) << "\n";
        }
    }
    out << "end\n";
    return out.str();
}

void write_transcript(const std::string& path, const std::vector<PartyView>& views,
                      const std::string& digest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TranscriptError("cannot write transcript: " + path);
    out << render_transcript(views, digest);
}

TranscriptData parse_transcript(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line))
            throw TranscriptError(origin + ": truncated transcript");
        ++lineno;
        return line;
    };

    if (next_line() != "flmpc-transcript 1")
        throw TranscriptError(origin + ": not a transcript file");

    TranscriptData data;
    {
        std::istringstream head(next_line());
        std::string kw;
        head >> kw >> data.digest;
        if (kw != "digest") throw TranscriptError(origin + ":2: missing digest");
    }
    std::size_t parties = 0;
    {
        std::istringstream head(next_line());
        std::string kw;
        head >> kw >> parties;
        if (kw != "parties" || parties == 0)
            throw TranscriptError(origin + ":3: missing party count");
    }
    for (std::size_t p = 1; p <= parties; ++p) data.views.emplace_back((int)p);

    bool ended = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line == "end") {
            ended = true;
            break;
        }
        std::istringstream entry(line);
        std::string kw, kind_name;
        std::size_t party = 0;
        std::uint64_t seq = 0;
        std::uint32_t round = 0;
        entry >> kw >> party >> seq >> round >> kind_name;
        if (entry.fail() || kw != "entry")
            throw TranscriptError(where + ": expected an entry line");
        if (party < 1 || party > parties)
            throw TranscriptError(where + ": party index out of range");
        std::string payload;
        std::getline(entry, payload);
        if (payload.empty() || payload[0] != ' ')
            throw TranscriptError(where + ": missing payload");
        payload.erase(0, 1);

        PartyView& view = data.views[party - 1];
        if (seq != view.size())
            throw TranscriptError(where + ": sequence number " + std::to_string(seq) +
                                  " out of order for party " + std::to_string(party));
        view.append(round, entry_kind_from_name(kind_name), parse_value_canon(payload));
    }
    if (!ended) throw TranscriptError(origin + ": missing end marker");
    return data;
}

TranscriptData read_transcript(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TranscriptError("cannot read transcript: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_transcript(buf.str(), path);
}

} // namespace flmpc
