#include "doctest.h"

#include <set>

#include "flmpc/errors.hpp"
#include "flmpc/fl.hpp"
#include "flmpc/secure_agg.hpp"

using namespace flmpc;

TEST_CASE("pair enumeration order and slots") {
    CHECK(PairwiseMaskSet::pairs(1).empty());
    CHECK(PairwiseMaskSet::pairs(3) ==
          std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
    CHECK(PairwiseMaskSet::domain_size(5, 1, 2) == 5);
    CHECK(PairwiseMaskSet::domain_size(5, 1, 3) == 125);
    CHECK(PairwiseMaskSet::domain_size(5, 2, 2) == 25);

    PairwiseMaskSet set(5, 1, 3);
    set.set_pad(1, 3, FieldVector(5, {4}));
    CHECK(set.pad(1, 3) == FieldVector(5, {4}));
    CHECK(set.pad(3, 1) == FieldVector(5, {4})); // unordered access
    CHECK_THROWS_AS(set.pad(1, 1), DomainError);
    CHECK_THROWS_AS(set.pad(0, 2), DomainError);
    CHECK_THROWS_AS(set.set_pad(1, 2, FieldVector(7, {1})), DomainError);
}

TEST_CASE("both owners record the identical pad") {
    auto set = PairwiseMaskSet::from_seed(5, 2, 3, 1234, 0);
    for (auto [i, j] : PairwiseMaskSet::pairs(3)) {
        MaskList mi = set.masks_for_client(i);
        MaskList mj = set.masks_for_client(j);
        auto find = [&](const MaskList& list) {
            for (const auto& share : list)
                if (share.low == i && share.high == j) return share.pad;
            FAIL("pad not recorded for the pair");
            return FieldVector();
        };
        CHECK(find(mi) == find(mj));
    }
}

TEST_CASE("single client has no pads and masks nothing") {
    PairwiseMaskSet set(5, 1, 1);
    FieldVector x(5, {3});
    CHECK(mask_update(x, set, 1) == x);
    CHECK(set.masks_for_client(1).empty());
}

TEST_CASE("two-client masking cancels pairwise") {
    PairwiseMaskSet set(5, 1, 2);
    set.set_pad(1, 2, FieldVector(5, {2}));
    FieldVector x1(5, {3}), x2(5, {4});
    auto y1 = mask_update(x1, set, 1);
    auto y2 = mask_update(x2, set, 2);
    CHECK(y1 == FieldVector(5, {0}));
    CHECK(y2 == FieldVector(5, {2}));
    CHECK(y1 + y2 == x1 + x2);
}

TEST_CASE("mask sums cancel for every assignment over three clients") {
    const FieldVector x1(5, {1}), x2(5, {2}), x3(5, {4});
    const FieldVector expected = x1 + x2 + x3;
    const std::uint64_t total = PairwiseMaskSet::domain_size(5, 1, 3);
    REQUIRE(total == 125);
    for (std::uint64_t index = 0; index < total; ++index) {
        auto set = PairwiseMaskSet::from_index(5, 1, 3, index);
        auto sum = mask_update(x1, set, 1) + mask_update(x2, set, 2) + mask_update(x3, set, 3);
        REQUIRE(sum == expected);
    }
}

TEST_CASE("unmasking recovers the plain aggregate") {
    CHECK(unmask_aggregate({FieldVector(5, {0}), FieldVector(5, {2})}, 2) == FieldVector(5, {2}));
    CHECK_THROWS_AS(unmask_aggregate({FieldVector(5, {0})}, 2), IncompleteRoundError);

    // all-zero inputs: aggregate is zero no matter the masks
    for (std::uint64_t index = 0; index < 125; ++index) {
        auto set = PairwiseMaskSet::from_index(5, 1, 3, index);
        std::vector<FieldVector> masked;
        for (int c = 1; c <= 3; ++c) masked.push_back(mask_update(FieldVector(5, 1), set, c));
        REQUIRE(unmask_aggregate(masked, 3) == FieldVector(5, 1));
    }

    // the Z_17 update pair under every pad: aggregate is the image of -12
    FieldVector expected(17, 1);
    expected.encode(0, -12);
    for (std::uint32_t pad = 0; pad < 17; ++pad) {
        PairwiseMaskSet set(17, 1, 2);
        set.set_pad(1, 2, FieldVector(17, {pad}));
        auto masked = std::vector<FieldVector>{mask_update(FieldVector(17, {13}), set, 1),
                                               mask_update(FieldVector(17, {9}), set, 2)};
        REQUIRE(unmask_aggregate(masked, 2) == expected);
    }
}

TEST_CASE("masked rounds agree with plain aggregation exhaustively") {
    // all 25 input pairs x all 5 pad values over Z_5, two clients
    for (std::uint32_t a = 0; a < 5; ++a)
        for (std::uint32_t b = 0; b < 5; ++b)
            for (std::uint64_t index = 0; index < 5; ++index) {
                auto set = PairwiseMaskSet::from_index(5, 1, 2, index);
                std::vector<PartyView> views{PartyView(1), PartyView(2), PartyView(3)};
                std::vector<FieldVector> inputs{FieldVector(5, {a}), FieldVector(5, {b})};
                auto agg = secure_agg_round(inputs, set, views, 0);
                REQUIRE(agg == aggregate_plain(inputs));
            }
}

TEST_CASE("the server sees only masked values") {
    PairwiseMaskSet set(5, 1, 2);
    set.set_pad(1, 2, FieldVector(5, {3}));
    std::vector<FieldVector> inputs{FieldVector(5, {1}), FieldVector(5, {4})};
    std::vector<PartyView> views{PartyView(1), PartyView(2), PartyView(3)};
    secure_agg_round(inputs, set, views, 0);

    const PartyView& server = views[2];
    REQUIRE(server.size() == 2);
    for (std::size_t i = 0; i < server.size(); ++i) {
        const auto& e = server.entry(i);
        CHECK(e.kind == EntryKind::MessageIn);
        // nonzero pad: no client's wire value equals its plain input
        CHECK(std::get<FieldVector>(e.payload) != inputs[i]);
    }

    // client tapes carry the pads
    CHECK(views[0].entry(0).kind == EntryKind::Randomness);
    CHECK(std::get<MaskList>(views[0].entry(0).payload).size() == 1);
}

TEST_CASE("zero masks degenerate to the plain server view") {
    PairwiseMaskSet set(5, 1, 2);
    std::vector<FieldVector> inputs{FieldVector(5, {1}), FieldVector(5, {4})};
    std::vector<PartyView> views{PartyView(1), PartyView(2), PartyView(3)};
    secure_agg_round(inputs, set, views, 0);
    CHECK(std::get<FieldVector>(views[2].entry(0).payload) == inputs[0]);
    CHECK(std::get<FieldVector>(views[2].entry(1).payload) == inputs[1]);
}

TEST_CASE("the single-client masked round forwards the input") {
    PairwiseMaskSet set(5, 1, 1);
    std::vector<FieldVector> inputs{FieldVector(5, {3})};
    std::vector<PartyView> views{PartyView(1), PartyView(2)};
    auto agg = secure_agg_round(inputs, set, views, 0);
    CHECK(agg == inputs[0]);
    CHECK(std::get<FieldVector>(views[1].entry(0).payload) == inputs[0]);
}

TEST_CASE("mask index enumeration is a bijection") {
    std::set<std::string> seen;
    for (std::uint64_t index = 0; index < 125; ++index) {
        auto set = PairwiseMaskSet::from_index(5, 1, 3, index);
        MaskList all;
        for (auto [i, j] : PairwiseMaskSet::pairs(3)) all.push_back({i, j, set.pad(i, j)});
        auto [it, fresh] = seen.insert(canon(Value(all)));
        (void)it;
        REQUIRE(fresh);
    }
    CHECK(seen.size() == 125);
    CHECK_THROWS_AS(PairwiseMaskSet::from_index(5, 1, 3, 125), DomainError);
}
