#include "fqmag/restriction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <utility>

#include "fqmag/errors.hpp"
#include "fqmag/kahan.hpp"

namespace fqmag {

namespace {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;
using cld = std::complex<long double>;

std::vector<cld> tilde_ld(const Space& sp, const PointSet& E) {
    std::vector<cld> f(static_cast<std::size_t>(sp.npoints()));
    for (i64 x : E.points) f[static_cast<std::size_t>(x)] = cld(1.0L, 0.0L);
    return sp.plan().apply<long double>(std::move(f), TransformMode::Tilde);
}

// |E| >= q^{e/2} decided in integers as |E|^2 >= q^e.
bool size_at_least_half_power(i64 size, i64 q, int e) {
    u128 qe = 1;
    for (int i = 0; i < e; ++i) qe *= static_cast<u128>(q);
    return static_cast<u128>(size) * static_cast<u128>(size) >= qe;
}

u64 splitmix64(u64& state) {
    state += 0x9e3779b97f4a7c15ULL;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

u64 bounded_draw(u64& state, u64 n) {
    const u64 reject_below = (0 - n) % n;
    for (;;) {
        const u64 r = splitmix64(state);
        if (r >= reject_below) return r % n;
    }
}

// size distinct positions in [0, n), deterministic for a given state.
std::vector<i64> sample_positions(u64& state, i64 n, i64 size) {
    std::vector<i64> pool(static_cast<std::size_t>(n));
    for (i64 i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (i64 i = 0; i < size; ++i) {
        const i64 j = i + static_cast<i64>(bounded_draw(state, static_cast<u64>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(size));
    return pool;
}

} // namespace

MomentTable sphere_moment(const Space& sp, const PointSet& E, int k) {
    if (k < 1) throw BadSpec("sphere moment requires k >= 1, got " + std::to_string(k));
    const int q = sp.field().q();
    auto ehat = sp.set_hat(E);
    const auto& spheres = sp.spheres();

    MomentTable out;
    out.k = k;
    out.per_t.resize(q);
    for (int t = 0; t < q; ++t) {
        KahanSum<long double> s;
        for (i64 v : spheres.members[t])
            s.add(powl(std::abs(static_cast<cld>((*ehat)[static_cast<std::size_t>(v)])),
                       static_cast<long double>(k)));
        out.per_t[t] = static_cast<double>(s.sum);
    }
    out.argmax_t = 1;
    for (int t = 1; t < q; ++t)
        if (out.per_t[t] > out.per_t[out.argmax_t]) out.argmax_t = t;
    out.max_nonzero_t = out.per_t[out.argmax_t];
    return out;
}

Rational lemma32_threshold(int d) { return {12 * d - 8, 3 * d + 4}; }

Rational lemma32_e_exponent(int d, int k) { return {(3 * k - 3) * d + 4 * k + 2, 3 * d + 4}; }

int lemma32_q_exponent(int d, int k) { return d - d * k - 1; }

Rational lemma33_q_exponent(int d) { return {-27 * d * d + 75 * d + 12, 12 * d - 32}; }

Rational lemma33_e_exponent(int d) { return {15 * d - 46, 6 * d - 16}; }

Rational holder_theta(int d) { return {6 * d - 4, 9 * d - 24}; }

ConstantReport restriction_ratio(const Space& sp, const PointSet& E, int k,
                                 RestrictionLemma lemma) {
    const int d = sp.d();
    const int q = sp.field().q();

    ConstantReport rep;
    long double q_exp, e_exp;
    if (lemma == RestrictionLemma::L32) {
        rep.lemma = "L3.2";
        if (d % 2 != 0 || d < 4)
            throw HypothesisFail("L3.2 needs even d >= 4, got d = " + std::to_string(d));
        const Rational gate = lemma32_threshold(d);
        if (!(Rational(k) > gate))
            throw HypothesisFail("L3.2 needs k > (12d-8)/(3d+4): k = " + std::to_string(k) +
                                 " <= " + gate.str());
        q_exp = static_cast<long double>(lemma32_q_exponent(d, k));
        e_exp = static_cast<long double>(lemma32_e_exponent(d, k).value());
    } else {
        rep.lemma = "L3.3";
        if (d % 2 != 0 || d < 8)
            throw HypothesisFail("L3.3 needs even d >= 8, got d = " + std::to_string(d));
        if (k != 3) throw HypothesisFail("L3.3 holds for k = 3, got k = " + std::to_string(k));
        if (!size_at_least_half_power(E.size(), q, d - 1))
            throw HypothesisFail("L3.3 needs |E| >= q^{(d-1)/2}: |E| = " +
                                 std::to_string(E.size()));
        q_exp = static_cast<long double>(lemma33_q_exponent(d).value());
        e_exp = static_cast<long double>(lemma33_e_exponent(d).value());
    }

    const MomentTable mt = sphere_moment(sp, E, k);
    rep.measured_lhs = mt.max_nonzero_t;
    rep.bound_rhs_without_constant = static_cast<double>(
        powl(static_cast<long double>(q), q_exp) *
        powl(static_cast<long double>(E.size()), e_exp));
    rep.implied_constant =
        rep.bound_rhs_without_constant > 0.0 ? rep.measured_lhs / rep.bound_rhs_without_constant
                                             : 0.0;
    if (lemma == RestrictionLemma::L33)
        rep.log_slack = rep.implied_constant / std::log(static_cast<double>(q));
    return rep;
}

namespace {

// counts[delta] = #{(a, b) in E x E : a - b = delta}, by direct pair
// enumeration over predecoded coordinate rows (independent of transforms).
std::vector<i64> difference_counts(const Space& sp, const PointSet& E) {
    const auto& f = sp.field();
    const int d = sp.d();
    const int q = f.q();
    const std::size_t m = E.points.size();

    std::vector<int> digits(m * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < m; ++i) {
        i64 v = E.points[i];
        for (int j = 0; j < d; ++j) {
            digits[i * d + j] = static_cast<int>(v % q);
            v /= q;
        }
    }
    std::vector<i64> qpow(d);
    qpow[0] = 1;
    for (int j = 1; j < d; ++j) qpow[j] = qpow[j - 1] * q;

    std::vector<i64> counts(static_cast<std::size_t>(sp.npoints()), 0);
    for (std::size_t a = 0; a < m; ++a) {
        const int* ra = &digits[a * d];
        for (std::size_t b = 0; b < m; ++b) {
            const int* rb = &digits[b * d];
            i64 idx = 0;
            for (int j = 0; j < d; ++j) idx += static_cast<i64>(f.sub(ra[j], rb[j])) * qpow[j];
            ++counts[static_cast<std::size_t>(idx)];
        }
    }
    return counts;
}

L2EnergyReport energy_for_t(const Space& sp, const PointSet& E, int t,
                            const std::vector<cld>& tilde, const std::vector<i64>& diff,
                            double tolerance) {
    const int d = sp.d();
    const int q = sp.field().q();
    const i64 n = sp.npoints();
    const auto& spheres = sp.spheres();

    L2EnergyReport rep;
    rep.t = t;

    KahanSum<long double> lhs;
    for (i64 x : spheres.members[t]) lhs.add(std::norm(tilde[static_cast<std::size_t>(x)]));

    const auto& sh = sp.sphere_hat(t);
    KahanSum<long double> pair_sum;
    for (i64 m = 0; m < n; ++m) {
        const i64 c = diff[static_cast<std::size_t>(m)];
        if (c != 0) pair_sum.add(static_cast<long double>(c) * sh[static_cast<std::size_t>(m)]);
    }
    const long double rhs = static_cast<long double>(n) * pair_sum.sum;

    rep.identity_lhs = static_cast<double>(lhs.sum);
    rep.identity_rhs = static_cast<double>(rhs);
    rep.identity_abs_diff = static_cast<double>(std::fabs(lhs.sum - rhs));
    rep.identity_budget = tolerance * std::max<double>(1.0, static_cast<double>(n));
    rep.identity_pass = rep.identity_abs_diff <= rep.identity_budget;

    const bool hyp = size_at_least_half_power(E.size(), q, d - 1);
    const long double size = static_cast<long double>(E.size());
    const long double energy_bound =
        powl(static_cast<long double>(q), (d - 1) / 2.0L) * size * size;

    rep.energy.lemma = "realaim";
    rep.energy.hypothesis_met = hyp;
    rep.energy.measured_lhs = static_cast<double>(lhs.sum);
    rep.energy.bound_rhs_without_constant = static_cast<double>(energy_bound);
    rep.energy.implied_constant =
        energy_bound > 0.0L ? static_cast<double>(lhs.sum / energy_bound) : 0.0;

    const long double surface = sqrtl(lhs.sum / static_cast<long double>(spheres.sizes[t]));
    const long double surface_bound = powl(static_cast<long double>(q), (1 - d) / 4.0L) * size;
    rep.surface_l2.lemma = "realaim_l2_norm";
    rep.surface_l2.hypothesis_met = hyp;
    rep.surface_l2.measured_lhs = static_cast<double>(surface);
    rep.surface_l2.bound_rhs_without_constant = static_cast<double>(surface_bound);
    rep.surface_l2.implied_constant =
        surface_bound > 0.0L ? static_cast<double>(surface / surface_bound) : 0.0;
    return rep;
}

} // namespace

L2EnergyReport l2_sphere_energy(const Space& sp, const PointSet& E, int t, double tolerance) {
    const int q = sp.field().q();
    if (t == 0) throw ZeroRadius("sphere energy is stated for t != 0");
    if (t < 0 || t >= q) throw BadSpec("radius " + std::to_string(t) + " outside F_q");
    if (sp.spheres().sizes[t] == 0) throw EmptySphere("S_" + std::to_string(t) + " is empty");
    return energy_for_t(sp, E, t, tilde_ld(sp, E), difference_counts(sp, E), tolerance);
}

std::vector<L2EnergyReport> l2_sphere_energy_all(const Space& sp, const PointSet& E,
                                                 double tolerance) {
    const int q = sp.field().q();
    const auto tilde = tilde_ld(sp, E);
    const auto diff = difference_counts(sp, E);
    std::vector<L2EnergyReport> out;
    for (int t = 1; t < q; ++t) {
        if (sp.spheres().sizes[t] == 0) continue;
        out.push_back(energy_for_t(sp, E, t, tilde, diff, tolerance));
    }
    return out;
}

HolderReport holder_chain(const Space& sp, const PointSet& E, int t, double tolerance) {
    const int d = sp.d();
    const int q = sp.field().q();
    if (d % 2 != 0 || d < 8)
        throw BadDimension("the interpolation chain needs even d >= 8, got " + std::to_string(d));
    if (t == 0) throw ZeroRadius("the interpolation chain is stated for t != 0");
    if (t < 0 || t >= q) throw BadSpec("radius " + std::to_string(t) + " outside F_q");
    if (sp.spheres().sizes[t] == 0) throw EmptySphere("S_" + std::to_string(t) + " is empty");

    HolderReport rep;
    rep.theta = holder_theta(d);
    const Rational one_third(1, 3);
    const Rational recombined = (Rational(1) - rep.theta) / Rational(2) +
                                Rational(3 * d + 4, 12 * d - 8) * rep.theta;
    rep.exponent_identity_ok =
        recombined == one_third && Rational(0) < rep.theta && rep.theta < Rational(1);
    if (!rep.exponent_identity_ok) throw BadSpec("interpolation exponents failed to recombine");

    std::vector<cd> f(static_cast<std::size_t>(sp.npoints()));
    for (i64 x : E.points) f[static_cast<std::size_t>(x)] = cd(1.0, 0.0);
    f = sp.plan().apply<double>(std::move(f), TransformMode::Tilde);

    const auto& spheres = sp.spheres();
    const Rational upper_exp(12 * d - 8, 3 * d + 4);
    rep.norm_triple = norm_eval(f, {3.0, Measure::Dsigma, t}, &spheres);
    rep.norm_square = norm_eval(f, {2.0, Measure::Dsigma, t}, &spheres);
    rep.norm_upper = norm_eval(f, {upper_exp.value(), Measure::Dsigma, t}, &spheres);

    const double theta = rep.theta.value();
    const double rhs = std::pow(rep.norm_square, 1.0 - theta) * std::pow(rep.norm_upper, theta);
    rep.pass = rep.norm_triple <= rhs + tolerance * std::max(1.0, rhs);

    rep.report.lemma = "holder";
    rep.report.hypothesis_met = true;
    rep.report.measured_lhs = rep.norm_triple;
    rep.report.bound_rhs_without_constant = rhs;
    rep.report.implied_constant = rhs > 0.0 ? rep.norm_triple / rhs : 0.0;
    return rep;
}

ConstantReport extension_constant(const Space& sp, int t, int trials, std::uint64_t seed) {
    const int d = sp.d();
    const int q = sp.field().q();
    if (d % 2 != 0 || d < 4)
        throw BadDimension("extension tracking needs even d >= 4, got " + std::to_string(d));
    if (t == 0) throw ZeroRadius("extension tracking is stated for t != 0");
    if (t < 0 || t >= q) throw BadSpec("radius " + std::to_string(t) + " outside F_q");
    if (trials < 1) throw BadSpec("trials must be >= 1, got " + std::to_string(trials));
    const auto& spheres = sp.spheres();
    const i64 st = spheres.sizes[t];
    if (st == 0) throw EmptySphere("S_" + std::to_string(t) + " is empty");

    const double p_exp = Rational(12 * d - 8, 9 * d - 12).value();
    const double densities[4] = {1.0 / static_cast<double>(st), 0.1, 0.5, 1.0};

    ConstantReport rep;
    rep.lemma = "extension_constant";
    u64 state = seed;
    for (int trial = 0; trial < trials; ++trial) {
        u64 trial_state = splitmix64(state);
        const double density = densities[trial % 4];
        i64 size = std::max<i64>(1, llround(density * static_cast<double>(st)));
        size = std::min(size, st);
        const auto positions = sample_positions(trial_state, st, size);

        std::vector<cd> on_sphere(static_cast<std::size_t>(st), cd(0.0, 0.0));
        std::vector<cd> on_space(static_cast<std::size_t>(sp.npoints()), cd(0.0, 0.0));
        for (i64 j : positions) {
            on_sphere[static_cast<std::size_t>(j)] = cd(1.0, 0.0);
            on_space[static_cast<std::size_t>(spheres.members[t][static_cast<std::size_t>(j)])] =
                cd(1.0, 0.0);
        }

        const SpectralTable ext = extension_fn(sp, on_sphere, t);
        const double lhs = norm_eval(ext.values, {4.0, Measure::Dm, -1});
        const double rhs = norm_eval(on_space, {p_exp, Measure::Dsigma, t}, &spheres);
        const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
        if (ratio > rep.implied_constant) {
            rep.implied_constant = ratio;
            rep.measured_lhs = lhs;
            rep.bound_rhs_without_constant = rhs;
        }
    }
    return rep;
}

} // namespace fqmag
