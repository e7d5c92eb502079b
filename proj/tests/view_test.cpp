#include "doctest.h"

#include <set>

#include "flmpc/view.hpp"

using namespace flmpc;

TEST_CASE("view append assigns strictly increasing sequence numbers") {
    PartyView v(1);
    v.append(0, EntryKind::Input, Bottom{});
    v.append(0, EntryKind::MessageIn, FieldVector(5, {2}));
    v.append(1, EntryKind::Output, Ack{});
    REQUIRE(v.size() == 3);
    CHECK(v.entry(0).seq == 0);
    CHECK(v.entry(1).seq == 1);
    CHECK(v.entry(2).seq == 2);
    CHECK(v.entry(2).round == 1);
}

TEST_CASE("canonical serialization distinguishes kinds, rounds and payloads") {
    std::set<std::string> seen;
    auto insert_fresh = [&](const PartyView& v) {
        auto [it, fresh] = seen.insert(v.canon());
        (void)it;
        CHECK(fresh);
    };

    PartyView a(1);
    a.append(0, EntryKind::MessageIn, FieldVector(5, {2}));
    insert_fresh(a);

    PartyView b(1);
    b.append(0, EntryKind::MessageOut, FieldVector(5, {2}));
    insert_fresh(b);

    PartyView c(1);
    c.append(1, EntryKind::MessageIn, FieldVector(5, {2}));
    insert_fresh(c);

    PartyView d(1);
    d.append(0, EntryKind::MessageIn, FieldVector(5, {3}));
    insert_fresh(d);

    PartyView e(2);
    e.append(0, EntryKind::MessageIn, FieldVector(5, {2}));
    insert_fresh(e);

    // same entries, one view vs split across kinds
    PartyView f(1);
    f.append(0, EntryKind::MessageIn, FieldVector(5, {2}));
    f.append(0, EntryKind::MessageIn, FieldVector(5, {2}));
    insert_fresh(f);
}

TEST_CASE("value canon covers every alternative injectively") {
    std::set<std::string> seen;
    auto fresh = [&](const Value& v) {
        auto [it, ok] = seen.insert(canon(v));
        (void)it;
        CHECK(ok);
    };
    fresh(Bottom{});
    fresh(Ack{});
    fresh(FieldVector(5, {0}));
    fresh(FieldVector(5, {0, 0}));
    fresh(FieldVector(7, {0}));
    fresh(RationalVector{Rational(0)});
    fresh(RationalVector{Rational(0), Rational(0)});
    fresh(ClientDataset{1, {{{Rational(1)}, Rational(2)}}});
    fresh(ClientDataset{2, {{{Rational(1)}, Rational(2)}}});
    fresh(SysParam{{Rational(0)}, "sq-linear", 0, 17, 1});
    fresh(SysParam{{Rational(0)}, "sq-linear", 1, 17, 1});
    fresh(MaskList{{1, 2, FieldVector(5, {3})}});
    fresh(Trajectory{{{Rational(1)}}});
    fresh(Trajectory{{{Rational(1)}, {Rational(1)}}});
}
