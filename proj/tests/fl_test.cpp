#include "doctest.h"

#include <algorithm>

#include "flmpc/errors.hpp"
#include "flmpc/fl.hpp"

using namespace flmpc;

namespace {

ClientDataset dataset(int owner, std::vector<std::pair<std::vector<Rational>, Rational>> rows) {
    ClientDataset ds;
    ds.owner = owner;
    for (auto& [features, label] : rows) ds.examples.push_back(Example{features, label});
    return ds;
}

std::vector<CandidateClient> pool_of(std::vector<ClientDataset> datasets) {
    std::vector<CandidateClient> pool;
    for (auto& ds : datasets) pool.push_back(CandidateClient{ds.owner, ds});
    return pool;
}

FlConfig basic_config(std::uint32_t q, int clients, std::uint32_t rounds,
                      Rational lr = Rational(1, 4)) {
    FlConfig cfg;
    cfg.modulus = q;
    cfg.dimension = 1;
    cfg.clients = clients;
    cfg.rounds = rounds;
    cfg.learning_rate = lr;
    return cfg;
}

} // namespace

TEST_CASE("selection returns every eligible client when the pool is exact") {
    auto pool = pool_of({dataset(3, {{{Rational(1)}, Rational(0)}}),
                         dataset(1, {{{Rational(1)}, Rational(0)}}),
                         dataset(2, {{{Rational(1)}, Rational(0)}})});
    auto selected = select_clients(pool, 3, 1, 42);
    std::sort(selected.begin(), selected.end());
    CHECK(selected == std::vector<int>{1, 2, 3});
}

TEST_CASE("selection fails when too few clients are eligible") {
    auto pool = pool_of({dataset(1, {{{Rational(1)}, Rational(0)}}),
                         dataset(2, {{{Rational(1)}, Rational(0)}}),
                         dataset(3, {}), dataset(4, {}), dataset(5, {})});
    CHECK_THROWS_AS(select_clients(pool, 3, 1, 7), InsufficientClientsError);
}

TEST_CASE("selection is a pinned function of the seed") {
    std::vector<ClientDataset> datasets;
    for (int id = 1; id <= 5; ++id) datasets.push_back(dataset(id, {{{Rational(1)}, Rational(0)}}));
    auto pool = pool_of(datasets);

    auto first = select_clients(pool, 3, 1, 7);
    auto second = select_clients(pool, 3, 1, 7);
    CHECK(first == second);
    REQUIRE(first.size() == 3);

    // frozen regression value of the documented shuffle, seed 7 over {1..5}
    CHECK(first == std::vector<int>{5, 2, 4});

    auto other_seed = select_clients(pool, 3, 1, 8);
    CHECK(other_seed != first); // well, almost surely; pinned to this seed pair
}

TEST_CASE("broadcast delivers one identical sysparam per selected client") {
    FlConfig cfg = basic_config(17, 2, 1);
    std::vector<PartyView> views{PartyView(1), PartyView(2), PartyView(3)};
    SysParam sp = make_sysparam(cfg, {Rational(0)}, 0);
    broadcast_sysparam(sp, {1, 2}, views);

    REQUIRE(views[0].size() == 1);
    REQUIRE(views[1].size() == 1);
    REQUIRE(views[2].size() == 1);
    CHECK(views[2].entry(0).kind == EntryKind::MessageOut);
    CHECK(views[0].entry(0).kind == EntryKind::SysParamIn);
    CHECK(std::get<SysParam>(views[0].entry(0).payload) ==
          std::get<SysParam>(views[1].entry(0).payload));
    CHECK(std::get<SysParam>(views[0].entry(0).payload) ==
          std::get<SysParam>(views[2].entry(0).payload));
    CHECK(std::get<SysParam>(views[0].entry(0).payload).round == 0);

    CHECK_THROWS_AS(broadcast_sysparam(sp, {3}, views), SelectionError);
    CHECK_THROWS_AS(broadcast_sysparam(sp, {0}, views), SelectionError);
}

TEST_CASE("client update computes the exact quantized gradient") {
    FlConfig cfg = basic_config(17, 1, 1);

    // perfect fit: w=1, example (1 ; 1) has zero gradient
    SysParam sp1 = make_sysparam(cfg, {Rational(1)}, 0);
    auto u1 = client_update(dataset(1, {{{Rational(1)}, Rational(1)}}), sp1);
    CHECK(u1 == FieldVector(17, {0}));

    // w=0, example (1 ; 2): g = 2(0-2)*1 = -4, encoded 13 in Z_17
    SysParam sp2 = make_sysparam(cfg, {Rational(0)}, 0);
    auto u2 = client_update(dataset(1, {{{Rational(1)}, Rational(2)}}), sp2);
    CHECK(u2 == FieldVector(17, {13}));

    // adding example (2 ; 1): g = -4 + 2(0-1)*2 = -8, encoded 9
    auto u3 = client_update(
        dataset(1, {{{Rational(1)}, Rational(2)}, {{Rational(2)}, Rational(1)}}), sp2);
    CHECK(u3 == FieldVector(17, {9}));

    CHECK_THROWS_AS(client_update(dataset(1, {{{Rational(1), Rational(1)}, Rational(0)}}), sp2),
                    DomainError);
    // g = 2(0-5)*1 = -10, beyond the centered range of Z_17
    CHECK_THROWS_AS(client_update(dataset(1, {{{Rational(1)}, Rational(5)}}), sp2),
                    OverflowError);
}

TEST_CASE("scaling multiplies the gradient before quantization") {
    FlConfig cfg = basic_config(17, 1, 1);
    cfg.scale = 2;
    SysParam sp = make_sysparam(cfg, {Rational(0)}, 0);
    // g = 2(0 - 3/4) = -3/2; scaled by 2 -> -3
    auto u = client_update(dataset(1, {{{Rational(1)}, Rational(3, 4)}}), sp);
    CHECK(u == FieldVector(17, {14}));
}

TEST_CASE("plain aggregation sums mod q") {
    CHECK(aggregate_plain({FieldVector(5, {3}), FieldVector(5, {4})}) == FieldVector(5, {2}));
    CHECK(aggregate_plain({FieldVector(5, {3})}) == FieldVector(5, {3}));

    // 13 + 9 = 22 = 5 mod 17, the reduced image of -4 + -8 = -12
    auto agg = aggregate_plain({FieldVector(17, {13}), FieldVector(17, {9})});
    CHECK(agg == FieldVector(17, {5}));
    FieldVector expected(17, 1);
    expected.encode(0, -12);
    CHECK(agg == expected);

    // decode of the sum equals the sum of decodes while within range
    auto small = aggregate_plain({FieldVector(17, {13}), FieldVector(17, {16})});
    CHECK(small.decode(0) == -4 + -1);

    CHECK_THROWS_AS(aggregate_plain({}), DomainError);
    CHECK_THROWS_AS(aggregate_plain({FieldVector(5, {1}), FieldVector(7, {1})}), DomainError);
}

TEST_CASE("model update applies the exact rational step") {
    // zero aggregate leaves the model unchanged
    CHECK(model_update({Rational(3, 7)}, FieldVector(17, {0}), 2, Rational(1, 4), 1, 17) ==
          RationalVector{Rational(3, 7)});

    // w=0, aggregate 13 (decode -4), one client, lr 1/4: w' = 1
    CHECK(model_update({Rational(0)}, FieldVector(17, {13}), 1, Rational(1, 4), 1, 17) ==
          RationalVector{Rational(1)});

    // w=1, decode -4, two clients, lr 1/2: w' = 1 - (1/2)(-2) = 2
    CHECK(model_update({Rational(1)}, FieldVector(17, {13}), 2, Rational(1, 2), 1, 17) ==
          RationalVector{Rational(2)});

    CHECK_THROWS_AS(model_update({Rational(0)}, FieldVector(5, {0}), 1, Rational(1), 1, 17),
                    DomainError);
}

TEST_CASE("round functionality matches the hand-composed pipeline") {
    FlConfig cfg = basic_config(17, 1, 1);
    auto f = round_functionality(cfg);

    auto out = evaluate_functionality(
        f, {dataset(1, {{{Rational(1)}, Rational(2)}}), RationalVector{Rational(0)}}, 0);
    CHECK(std::holds_alternative<Ack>(out[0]));
    CHECK(std::get<RationalVector>(out[1]) == RationalVector{Rational(1)});

    // zero-gradient dataset: ideal output equals the input model
    auto fixed = evaluate_functionality(
        f, {dataset(1, {{{Rational(1)}, Rational(5, 7)}}), RationalVector{Rational(5, 7)}}, 0);
    CHECK(std::get<RationalVector>(fixed[1]) == RationalVector{Rational(5, 7)});

    // two clients: compare against the explicit pipeline
    FlConfig cfg2 = basic_config(17, 2, 1);
    auto f2 = round_functionality(cfg2);
    auto d1 = dataset(1, {{{Rational(1)}, Rational(2)}});
    auto d2 = dataset(2, {{{Rational(1)}, Rational(2)}, {{Rational(2)}, Rational(1)}});
    RationalVector w0{Rational(0)};

    SysParam sp = make_sysparam(cfg2, w0, 0);
    auto expected = model_update(
        w0, aggregate_plain({client_update(d1, sp), client_update(d2, sp)}), 2,
        cfg2.learning_rate, cfg2.scale, cfg2.modulus);
    auto got = evaluate_functionality(f2, {d1, d2, w0}, 0);
    CHECK(std::get<RationalVector>(got[2]) == expected);
}

TEST_CASE("single-round protocol run agrees with the ideal evaluator") {
    FlConfig cfg = basic_config(17, 1, 1);
    auto pool = pool_of({dataset(1, {{{Rational(1)}, Rational(2)}})});

    std::vector<PartyView> views;
    auto out = run_fl(cfg, pool, Variant::Plain, {}, views);
    CHECK(out.final_model == RationalVector{Rational(1)});

    auto ideal = evaluate_functionality(
        round_functionality(cfg),
        {pool[0].dataset, cfg.model_or_zero()}, 0);
    CHECK(out.final_model == std::get<RationalVector>(ideal[1]));
}

TEST_CASE("zero-gradient datasets are a fixed point over any round count") {
    FlConfig cfg = basic_config(17, 2, 2);
    auto pool = pool_of({dataset(1, {{{Rational(1)}, Rational(0)}}),
                         dataset(2, {{{Rational(2)}, Rational(0)}})});
    std::vector<PartyView> views;
    auto out = run_fl(cfg, pool, Variant::Plain, {}, views);
    CHECK(out.final_model == RationalVector{Rational(0)});
    CHECK(out.trajectory.models.size() == 2);
}

TEST_CASE("protocol equals composed functionality across a dataset grid") {
    // the executable form of the protocol/functionality agreement claim at
    // unit scale: q=17, two clients, two rounds, nine dataset pairs
    FlConfig cfg = basic_config(17, 2, 2, Rational(1, 8));
    auto composed = composed_fl_functionality(cfg);

    for (int a = -1; a <= 1; ++a) {
        for (int b = -1; b <= 1; ++b) {
            auto d1 = dataset(1, {{{Rational(1)}, Rational(a)}});
            auto d2 = dataset(2, {{{Rational(1)}, Rational(b)}});
            auto pool = pool_of({d1, d2});

            std::vector<PartyView> views;
            auto protocol_out = run_fl(cfg, pool, Variant::Plain, {}, views);

            auto ideal = evaluate_functionality(composed, {d1, d2, cfg.model_or_zero()}, 0);
            CHECK(protocol_out.final_model == std::get<RationalVector>(ideal[2]));
        }
    }
}

TEST_CASE("plain, oracle and masked variants produce the same final model") {
    FlConfig cfg = basic_config(17, 2, 2, Rational(1, 8));
    auto pool = pool_of({dataset(1, {{{Rational(1)}, Rational(1)}}),
                         dataset(2, {{{Rational(1)}, Rational(-1, 2)}})});

    std::vector<PartyView> plain_views, oracle_views, masked_views;
    auto plain = run_fl(cfg, pool, Variant::Plain, {}, plain_views);
    auto oracle = run_fl(cfg, pool, Variant::Oracle, {}, oracle_views);
    auto masked = run_fl(cfg, pool, Variant::Masked, seeded_mask_provider(cfg, 99),
                         masked_views);

    CHECK(plain.final_model == oracle.final_model);
    CHECK(plain.final_model == masked.final_model);
    CHECK(canon(Value(plain.trajectory)) == canon(Value(masked.trajectory)));

    // the variants differ only in views: oracle run logged oracle traffic
    bool oracle_entries = false;
    for (const auto& e : oracle_views[2].entries())
        oracle_entries = oracle_entries || e.kind == EntryKind::OracleAnswer;
    CHECK(oracle_entries);
}

TEST_CASE("every protocol operation only ever appends to views") {
    FlConfig cfg = basic_config(17, 2, 2, Rational(1, 8));
    auto pool = pool_of({dataset(1, {{{Rational(1)}, Rational(1)}}),
                         dataset(2, {{{Rational(1)}, Rational(0)}})});
    std::vector<PartyView> views;
    run_fl(cfg, pool, Variant::Masked, seeded_mask_provider(cfg, 5), views);

    for (const auto& view : views) {
        REQUIRE(view.size() > 0);
        for (std::size_t i = 0; i < view.size(); ++i) CHECK(view.entry(i).seq == i);
    }
    // round-0 entries precede round-1 entries in every view
    for (const auto& view : views) {
        std::uint32_t last_round = 0;
        for (const auto& e : view.entries()) {
            CHECK(e.round >= last_round);
            last_round = e.round;
        }
    }
}

TEST_CASE("run_fl preserves views up to the failure point") {
    FlConfig cfg = basic_config(17, 1, 2, Rational(1));
    // round 1 succeeds (gradient 6, model moves to -6); the grown model
    // makes the round-2 gradient overflow the centered range
    auto pool = pool_of({dataset(1, {{{Rational(2)}, Rational(-3, 2)}})});
    std::vector<PartyView> views;
    CHECK_THROWS_AS(run_fl(cfg, pool, Variant::Plain, {}, views), OverflowError);
    CHECK(views.size() == 2);
    CHECK(views[0].size() > 0); // round-1 entries survived
}

TEST_CASE("config validation rejects bad parameters") {
    FlConfig cfg = basic_config(15, 2, 1);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = basic_config(17, 0, 1);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = basic_config(17, 2, 0);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = basic_config(17, 2, 1);
    cfg.learning_rate = Rational(0);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = basic_config(17, 2, 1);
    cfg.program = "unknown";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
