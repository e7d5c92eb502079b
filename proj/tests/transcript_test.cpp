#include "doctest.h"

#include "flmpc/errors.hpp"
#include "flmpc/fl.hpp"
#include "flmpc/transcript.hpp"

using namespace flmpc;

namespace {

std::vector<PartyView> sample_run() {
    FlConfig cfg;
    cfg.modulus = 17;
    cfg.clients = 2;
    cfg.rounds = 2;
    cfg.learning_rate = Rational(1, 8);

    std::vector<CandidateClient> pool;
    for (int id = 1; id <= 2; ++id) {
        ClientDataset ds;
        ds.owner = id;
        ds.examples.push_back(Example{{Rational(1)}, Rational(id - 1)});
        pool.push_back(CandidateClient{id, ds});
    }
    std::vector<PartyView> views;
    run_fl(cfg, pool, Variant::Masked, seeded_mask_provider(cfg, 11), views);
    return views;
}

std::string views_canon(const std::vector<PartyView>& views) {
    std::string out;
    for (const auto& v : views) out += v.canon();
    return out;
}

} // namespace

TEST_CASE("every value alternative survives the canonical round-trip") {
    std::vector<Value> values{
        Bottom{},
        Ack{},
        FieldVector(17, {0, 13, 9}),
        RationalVector{Rational(-1, 2), Rational(3)},
        ClientDataset{2, {{{Rational(1), Rational(0)}, Rational(-3, 2)}}},
        SysParam{{Rational(1, 8)}, "sq-linear-step", 3, 17, 2},
        MaskList{{1, 2, FieldVector(5, {4})}, {1, 3, FieldVector(5, {0})}},
        Trajectory{{{Rational(0)}, {Rational(1, 2)}}},
    };
    for (const auto& v : values) {
        std::string encoded = canon(v);
        Value decoded = parse_value_canon(encoded);
        CHECK(canon(decoded) == encoded);
    }
    CHECK_THROWS_AS(parse_value_canon("7:nonsense,"), TranscriptError);
    CHECK_THROWS_AS(parse_value_canon("junk"), TranscriptError);
    // length prefix must match exactly
    CHECK_THROWS_AS(parse_value_canon("2:ack,"), TranscriptError);
}

TEST_CASE("transcripts reproduce views byte for byte") {
    auto views = sample_run();
    std::string text = render_transcript(views, "00112233aabbccdd");
    auto parsed = parse_transcript(text, "mem");
    CHECK(parsed.digest == "00112233aabbccdd");
    REQUIRE(parsed.views.size() == views.size());
    CHECK(views_canon(parsed.views) == views_canon(views));

    // serialize -> parse -> serialize is the identity on the file too
    CHECK(render_transcript(parsed.views, parsed.digest) == text);
}

TEST_CASE("transcript files round-trip through disk") {
    auto views = sample_run();
    const std::string path = "test_transcript_roundtrip.txt";
    write_transcript(path, views, "deadbeefdeadbeef");
    auto parsed = read_transcript(path);
    CHECK(views_canon(parsed.views) == views_canon(views));
    std::remove(path.c_str());
}

TEST_CASE("malformed transcripts are rejected with context") {
    CHECK_THROWS_AS(parse_transcript("not a transcript\n", "t"), TranscriptError);
    CHECK_THROWS_AS(parse_transcript("flmpc-transcript 1\ndigest x\nparties 1\n", "t"),
                    TranscriptError); // missing end
    // out-of-order sequence numbers
    std::string bad =
        "flmpc-transcript 1\n"
        "digest 0000000000000000\n"
        "parties 1\n"
        "entry 1 1 0 input 1:_,\n"
        "end\n";
    CHECK_THROWS_AS(parse_transcript(bad, "t"), TranscriptError);
}
