#include <cmath>

#include <doctest.h>

#include "fqmag/restriction.hpp"
#include "oracle_dft.hpp"

using namespace fqmag;

TEST_CASE("sphere moments: closed forms and column consistency") {
    Space sp(make_field(5, 1), 2);
    const std::int64_t n = sp.npoints();

    const PointSet origin = sp.make_set("singleton:0");
    const MomentTable mo = sphere_moment(sp, origin, 3);
    for (int t = 0; t < 5; ++t)
        REQUIRE(mo.per_t[static_cast<std::size_t>(t)] ==
                doctest::Approx(static_cast<double>(sp.spheres().sizes[t]) /
                                std::pow(static_cast<double>(n), 3))
                    .epsilon(1e-10));

    const PointSet full = sp.make_set("full");
    const MomentTable mf = sphere_moment(sp, full, 2);
    REQUIRE(mf.per_t[0] == doctest::Approx(1.0).epsilon(1e-12)); // Ehat = delta_0
    for (int t = 1; t < 5; ++t) REQUIRE(mf.per_t[static_cast<std::size_t>(t)] < 1e-15);
    REQUIRE(mf.max_nonzero_t < 1e-15);

    const PointSet E = sp.make_set("random:size=8,seed=21");
    for (int k = 2; k <= 4; ++k) {
        const MomentTable mt = sphere_moment(sp, E, k);
        long double col = 0.0L, direct = 0.0L;
        for (double v : mt.per_t) col += v;
        for (const auto& z : *sp.set_hat(E)) direct += std::pow(std::abs(z), k);
        REQUIRE(std::fabs(static_cast<double>(col - direct)) < 1e-12);
        REQUIRE(mt.per_t[static_cast<std::size_t>(mt.argmax_t)] ==
                doctest::Approx(mt.max_nonzero_t));
        REQUIRE(mt.argmax_t != 0);
    }
    CHECK_THROWS_AS((void)sphere_moment(sp, E, 0), BadSpec);
}

TEST_CASE("restriction exponents are exact rationals") {
    REQUIRE(lemma32_threshold(4) == Rational(5, 2));
    REQUIRE(lemma32_e_exponent(4, 3) == Rational(19, 8));
    REQUIRE(lemma32_q_exponent(4, 3) == -9);
    REQUIRE(lemma33_q_exponent(8) == Rational(-279, 16));
    REQUIRE(lemma33_e_exponent(8) == Rational(37, 16));
    REQUIRE(holder_theta(8) == Rational(11, 12));
}

TEST_CASE("restriction ratio hypothesis gates") {
    {
        Space sp(make_field(3, 1), 3);
        const PointSet E = sp.make_set("random:size=9,seed=1");
        CHECK_THROWS_AS((void)restriction_ratio(sp, E, 3, RestrictionLemma::L32), HypothesisFail);
    }
    {
        Space sp(make_field(3, 1), 4);
        const PointSet E = sp.make_set("random:size=20,seed=1");
        // k = 2 sits below the (12d-8)/(3d+4) = 5/2 threshold
        CHECK_THROWS_AS((void)restriction_ratio(sp, E, 2, RestrictionLemma::L32), HypothesisFail);
        const ConstantReport rep = restriction_ratio(sp, E, 3, RestrictionLemma::L32);
        REQUIRE(rep.hypothesis_met);
        REQUIRE(std::isfinite(rep.implied_constant));
        REQUIRE(rep.implied_constant > 0.0);
        REQUIRE(rep.bound_rhs_without_constant ==
                doctest::Approx(std::pow(3.0, -9) * std::pow(20.0, 19.0 / 8.0)).epsilon(1e-12));
        // L33 needs d >= 8 and k = 3
        CHECK_THROWS_AS((void)restriction_ratio(sp, E, 3, RestrictionLemma::L33), HypothesisFail);
    }
    {
        Space sp(make_field(3, 1), 8);
        const PointSet big = sp.make_set("random:size=100,seed=2");
        CHECK_THROWS_AS((void)restriction_ratio(sp, big, 2, RestrictionLemma::L33), HypothesisFail);
        const PointSet small = sp.make_set("random:size=10,seed=2");
        // |E| = 10 < 3^{7/2} = 46.8: the size gate trips
        CHECK_THROWS_AS((void)restriction_ratio(sp, small, 3, RestrictionLemma::L33),
                        HypothesisFail);
        const ConstantReport rep = restriction_ratio(sp, big, 3, RestrictionLemma::L33);
        REQUIRE(rep.hypothesis_met);
        REQUIRE(std::isfinite(rep.implied_constant));
        REQUIRE(std::isfinite(rep.log_slack));
    }
}

TEST_CASE("sphere energy identity and extreme sets") {
    Space sp(make_field(5, 1), 3);
    {
        const PointSet origin = sp.make_set("singleton:0");
        for (int t = 1; t < 5; ++t) {
            const L2EnergyReport rep = l2_sphere_energy(sp, origin, t);
            // Etilde is identically 1, so the energy is |S_t|
            REQUIRE(rep.identity_lhs ==
                    doctest::Approx(static_cast<double>(sp.spheres().sizes[t])).epsilon(1e-10));
            REQUIRE(rep.identity_pass);
        }
    }
    {
        const PointSet full = sp.make_set("full");
        for (int t = 1; t < 5; ++t) {
            const L2EnergyReport rep = l2_sphere_energy(sp, full, t);
            REQUIRE(rep.identity_lhs < 1e-8); // Etilde = q^d delta_0 misses S_t
            REQUIRE(rep.identity_pass);
        }
    }
    {
        const PointSet E = sp.make_set("random:size=31,seed=17");
        const auto all = l2_sphere_energy_all(sp, E);
        REQUIRE(all.size() == 4);
        for (const auto& rep : all) {
            REQUIRE(rep.identity_pass);
            REQUIRE(rep.identity_abs_diff <= rep.identity_budget);
            // surface form is energy rescaled by |S_t|
            REQUIRE(rep.surface_l2.measured_lhs ==
                    doctest::Approx(std::sqrt(rep.identity_lhs /
                                              static_cast<double>(sp.spheres().sizes[rep.t])))
                        .epsilon(1e-10));
            const L2EnergyReport single = l2_sphere_energy(sp, E, rep.t);
            REQUIRE(single.identity_lhs == doctest::Approx(rep.identity_lhs).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS((void)l2_sphere_energy(sp, sp.make_set("full"), 0), ZeroRadius);
    CHECK_THROWS_AS((void)l2_sphere_energy(sp, sp.make_set("full"), 5), BadSpec);
    {
        Space line(make_field(3, 1), 1); // S_2 is empty on the line over F_3
        CHECK_THROWS_AS((void)l2_sphere_energy(line, line.make_set("full"), 2), EmptySphere);
    }
}

TEST_CASE("holder chain at dimension eight") {
    Space sp(make_field(3, 1), 8);
    {
        const PointSet single = sp.make_set("singleton:1");
        const HolderReport rep = holder_chain(sp, single, 1);
        REQUIRE(rep.theta == Rational(11, 12));
        REQUIRE(rep.exponent_identity_ok);
        REQUIRE(rep.pass);
        // |Etilde| = 1 everywhere: every norm is 1 and the chain is equality
        REQUIRE(rep.norm_triple == doctest::Approx(1.0).epsilon(1e-9));
        REQUIRE(rep.report.implied_constant == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (const char* spec : {"random:size=50,seed=3", "subfield", "full"}) {
        const PointSet E = sp.make_set(spec);
        for (int t = 1; t < 3; ++t) {
            const HolderReport rep = holder_chain(sp, E, t);
            CAPTURE(spec);
            CAPTURE(t);
            REQUIRE(rep.pass);
            REQUIRE(rep.norm_triple <=
                    rep.report.bound_rhs_without_constant * (1.0 + 1e-9) + 1e-9);
        }
    }
    Space low(make_field(3, 1), 4);
    CHECK_THROWS_AS((void)holder_chain(low, low.make_set("full"), 1), BadDimension);
    CHECK_THROWS_AS((void)holder_chain(sp, sp.make_set("full"), 0), ZeroRadius);
}

TEST_CASE("extension constant estimates are reproducible") {
    Space sp(make_field(5, 1), 4);
    const ConstantReport a = extension_constant(sp, 1, 5, 99);
    const ConstantReport b = extension_constant(sp, 1, 5, 99);
    REQUIRE(a.measured_lhs == b.measured_lhs);
    REQUIRE(a.implied_constant == b.implied_constant);
    REQUIRE(std::isfinite(a.implied_constant));
    REQUIRE(a.implied_constant > 0.0);
    const ConstantReport c = extension_constant(sp, 1, 5, 100);
    REQUIRE(std::isfinite(c.implied_constant));

    CHECK_THROWS_AS((void)extension_constant(sp, 0, 3, 1), ZeroRadius);
    CHECK_THROWS_AS((void)extension_constant(sp, 1, 0, 1), BadSpec);
    Space odd(make_field(5, 1), 3);
    CHECK_THROWS_AS((void)extension_constant(odd, 1, 3, 1), BadDimension);
}

TEST_CASE("subfield is dominated by its L3.2 threshold bound with small constant") {
    // (q, d) = (9, 4), E = F_3^4: largest subfield grid that stays fast
    Space sp(make_field(3, 2), 4);
    const PointSet E = sp.make_set("subfield");
    const ConstantReport rep = restriction_ratio(sp, E, 3, RestrictionLemma::L32);
    REQUIRE(rep.hypothesis_met);
    REQUIRE(std::isfinite(rep.implied_constant));
    REQUIRE(rep.implied_constant > 0.0);
}
