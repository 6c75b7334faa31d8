#include <utility>
#include <cmath>
#include <complex>

#include <doctest.h>

#include "fqmag/field.hpp"

using namespace fqmag;

namespace {
const std::pair<int, int> kFields[] = {{3, 1}, {5, 1}, {7, 1}, {3, 2},
                                       {11, 1}, {13, 1}, {5, 2}};
} // namespace

TEST_CASE("field axioms hold exhaustively") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        const int q = f.q();
        CAPTURE(p);
        CAPTURE(n);
        for (int a = 0; a < q; ++a) {
            REQUIRE(f.add(a, 0) == a);
            REQUIRE(f.mul(a, 1) == a);
            REQUIRE(f.add(a, f.neg(a)) == 0);
            if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
            for (int b = 0; b < q; ++b) {
                REQUIRE(f.add(a, b) == f.add(b, a));
                REQUIRE(f.mul(a, b) == f.mul(b, a));
                for (int c = 0; c < q; ++c) {
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("modulus selection is the lexicographically least irreducible") {
    // Over F_3 the least monic irreducible quadratic is x^2 + 1.
    const Field f9 = make_field(3, 2);
    REQUIRE(f9.spec().modulus == std::vector<int>{1, 0, 1});
    // Over F_5, x^2 + 2 comes first (x^2 + 1 factors as (x+2)(x+3)).
    const Field f25 = make_field(5, 2);
    REQUIRE(f25.spec().modulus == std::vector<int>{2, 0, 1});
}

TEST_CASE("prime subfield sits at indices below p") {
    const Field f = make_field(3, 2);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) REQUIRE(f.add(a, b) == (a + b) % 3);
    for (int a = 0; a < 9; ++a) REQUIRE(f.frobenius(f.frobenius(a)) == a);
    for (int a = 0; a < 3; ++a) REQUIRE(f.frobenius(a) == a);
}

TEST_CASE("trace is F_p-linear and surjective") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        std::vector<int> hits(static_cast<std::size_t>(p), 0);
        for (int a = 0; a < f.q(); ++a) {
            ++hits[static_cast<std::size_t>(f.trace(a))];
            for (int b = 0; b < f.q(); ++b)
                REQUIRE(f.trace(f.add(a, b)) == (f.trace(a) + f.trace(b)) % p);
        }
        for (int v = 0; v < p; ++v) REQUIRE(hits[static_cast<std::size_t>(v)] == f.q() / p);
    }
}

TEST_CASE("character orthogonality") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        for (int s = 1; s < f.q(); ++s) {
            cd sum(0.0, 0.0);
            for (int a = 0; a < f.q(); ++a) sum += f.chi_twisted(s, a);
            REQUIRE(std::abs(sum) < 1e-9);
        }
        cd trivial(0.0, 0.0);
        for (int a = 0; a < f.q(); ++a) trivial += f.chi_twisted(0, a);
        REQUIRE(std::abs(trivial - cd(static_cast<double>(f.q()), 0.0)) < 1e-9);
    }
}

TEST_CASE("quadratic character splits nonzero elements evenly") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        int squares = 0, nonsquares = 0, sum = 0;
        REQUIRE(f.eta(0) == 0);
        for (int a = 1; a < f.q(); ++a) {
            REQUIRE(f.eta(f.mul(a, a)) == 1);
            if (f.eta(a) == 1) ++squares;
            else ++nonsquares;
            sum += f.eta(a);
        }
        REQUIRE(squares == (f.q() - 1) / 2);
        REQUIRE(nonsquares == (f.q() - 1) / 2);
        REQUIRE(sum == 0);
        for (int a = 1; a < f.q(); ++a)
            for (int b = 1; b < f.q(); ++b) REQUIRE(f.eta(f.mul(a, b)) == f.eta(a) * f.eta(b));
    }
}

TEST_CASE("gauss sum magnitude and square") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        const cd g = gauss_sum(f);
        REQUIRE(std::abs(std::norm(g) - f.q()) < 1e-8);
        const cd g2 = g * g;
        REQUIRE(std::abs(g2 - cd(f.eta(f.neg(1)) * f.q(), 0.0)) < 1e-8);
        REQUIRE(g == f.gauss());
    }
    // Concrete values: G(F_3) = i sqrt(3), G(F_5) = sqrt(5).
    const cd g3 = make_field(3, 1).gauss();
    REQUIRE(std::abs(g3 - cd(0.0, std::sqrt(3.0))) < 1e-12);
    const cd g5 = make_field(5, 1).gauss();
    REQUIRE(std::abs(g5 - cd(std::sqrt(5.0), 0.0)) < 1e-12);
}

TEST_CASE("gauss_pow_even matches repeated multiplication") {
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        for (int d = 2; d <= 8; d += 2) {
            cd direct(1.0, 0.0);
            for (int i = 0; i < d; ++i) direct *= f.gauss();
            REQUIRE(std::abs(direct.imag()) < 1e-6);
            REQUIRE(f.gauss_pow_even(d) == doctest::Approx(direct.real()).epsilon(1e-9));
        }
        CHECK_THROWS_AS((void)f.gauss_pow_even(3), OddDimension);
    }
}

TEST_CASE("kloosterman sums: values, symmetry, Weil bound") {
    const Field f3 = make_field(3, 1);
    REQUIRE(kloosterman_sum(f3, 1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    for (auto [p, n] : kFields) {
        const Field f = make_field(p, n);
        const double bound = 2.0 * std::sqrt(static_cast<double>(f.q()));
        REQUIRE(kloosterman_sum(f, 0, 0) == doctest::Approx(f.q() - 1.0));
        for (int a = 0; a < f.q(); ++a)
            for (int b = 0; b < f.q(); ++b) {
                const double kab = kloosterman_sum(f, a, b);
                if (a != 0 && b != 0) {
                    REQUIRE(std::fabs(kab) <= bound + 1e-8);
                    REQUIRE(kab == doctest::Approx(kloosterman_sum(f, b, a)).epsilon(1e-9));
                } else if (a != 0 || b != 0) {
                    REQUIRE(kab == doctest::Approx(-1.0).epsilon(1e-9));
                }
            }
    }
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS((void)make_field(2, 1), CharTwo);
    CHECK_THROWS_AS((void)make_field(4, 1), NotPrime);
    CHECK_THROWS_AS((void)make_field(9, 1), NotPrime);
    CHECK_THROWS_AS((void)make_field(13, 2), TooLarge);
    CHECK_THROWS_AS((void)make_field(3, 0), BadSpec);
    CHECK_NOTHROW((void)make_field(11, 2)); // q = 121 sits exactly at the cap
    const Field f = make_field(3, 1);
    CHECK_THROWS_AS((void)additive_character(f, 1, 0), TrivialTwist);
    CHECK_NOTHROW((void)additive_character(f, 1, 0, false));
    CHECK_THROWS_AS((void)f.inv(0), BadSpec);
}
