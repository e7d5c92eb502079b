#include "doctest.h"

#include "flmpc/errors.hpp"
#include "flmpc/field.hpp"

using flmpc::FieldVector;

TEST_CASE("field vector arithmetic mod q") {
    FieldVector a(5, {3});
    FieldVector b(5, {4});
    CHECK((a + b)[0] == 2);
    CHECK((a - b)[0] == 4);
    CHECK((-b)[0] == 1);
    CHECK((-FieldVector(5, {0}))[0] == 0);

    FieldVector wrong_q(7, {1});
    CHECK_THROWS_AS(a + wrong_q, flmpc::DomainError);
    FieldVector wrong_dim(5, {1, 2});
    CHECK_THROWS_AS(a + wrong_dim, flmpc::DomainError);
}

TEST_CASE("centered decode and encode") {
    FieldVector v(17, {13});
    CHECK(v.decode(0) == -4);
    FieldVector w(17, {9});
    CHECK(w.decode(0) == -8);
    FieldVector mid(17, {8});
    CHECK(mid.decode(0) == 8);

    FieldVector e(17, 1);
    e.encode(0, -4);
    CHECK(e[0] == 13);
    e.encode(0, -8);
    CHECK(e[0] == 9);
    e.encode(0, 21);
    CHECK(e[0] == 4);

    // encode then decode is the identity on the centered range
    for (std::int64_t g = -8; g <= 8; ++g) {
        FieldVector x(17, 1);
        x.encode(0, g);
        CHECK(x.decode(0) == g);
    }
}

TEST_CASE("trial-division primality") {
    CHECK(flmpc::is_prime(2));
    CHECK(flmpc::is_prime(5));
    CHECK(flmpc::is_prime(17));
    CHECK_FALSE(flmpc::is_prime(1));
    CHECK_FALSE(flmpc::is_prime(15));
    CHECK_FALSE(flmpc::is_prime(91));
}
