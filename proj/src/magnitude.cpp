#include "fqmag/magnitude.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "fqmag/errors.hpp"
#include "fqmag/kahan.hpp"

namespace fqmag {

namespace {

using i64 = std::int64_t;
using u128 = unsigned __int128;
using cld = std::complex<long double>;

i64 checked_pow_size(i64 base, int k) {
    u128 acc = 1;
    for (int i = 0; i < k; ++i) {
        acc *= static_cast<u128>(base);
        if (acc > static_cast<u128>(std::numeric_limits<i64>::max()))
            throw TooLarge("|E|^k exceeds 64 bits: |E| = " + std::to_string(base) +
                           ", k = " + std::to_string(k));
    }
    return static_cast<i64>(acc);
}

std::vector<cld> indicator_ld(const Space& sp, const PointSet& E) {
    std::vector<cld> f(static_cast<std::size_t>(sp.npoints()));
    for (i64 x : E.points) f[static_cast<std::size_t>(x)] = cld(1.0L, 0.0L);
    return f;
}

// Extended-precision spectrum; the Space cache is double, which is not
// enough mantissa once counts are rebuilt by multiplying with q^{dk}.
std::vector<cld> hat_ld(const Space& sp, const PointSet& E) {
    return sp.plan().apply<long double>(indicator_ld(sp, E), TransformMode::Hat);
}

cld pow_int(cld z, int k) {
    cld acc(1.0L, 0.0L);
    for (int i = 0; i < k; ++i) acc *= z;
    return acc;
}

i64 round_count(long double re, long double im, const std::string& what) {
    if (std::fabs(im) >= 0.5L)
        throw RoundingOverflow(what + ": imaginary residual " + std::to_string((double)im));
    const i64 r = llroundl(re);
    if (std::fabs(re - static_cast<long double>(r)) >= 0.5L)
        throw RoundingOverflow(what + ": residual >= 0.5 at value " + std::to_string((double)re));
    if (r < 0)
        throw RoundingOverflow(what + ": negative count " + std::to_string(r));
    return r;
}

std::vector<i64> nu_direct(const Space& sp, const PointSet& E, int k) {
    const int q = sp.field().q();
    const i64 n = sp.npoints();
    auto tilde = sp.plan().apply<long double>(indicator_ld(sp, E), TransformMode::Tilde);
    std::vector<cld> w(tilde.size());
    for (std::size_t m = 0; m < tilde.size(); ++m) w[m] = pow_int(tilde[m], k);
    auto conv = sp.plan().apply<long double>(std::move(w), TransformMode::Inverse);
    const long double scale = 1.0L / static_cast<long double>(n);
    const auto& norm_of = sp.spheres().norm_of;
    std::vector<KahanSum<long double>> re(q), im(q);
    for (i64 y = 0; y < n; ++y) {
        const auto z = conv[static_cast<std::size_t>(y)] * scale;
        re[norm_of[static_cast<std::size_t>(y)]].add(z.real());
        im[norm_of[static_cast<std::size_t>(y)]].add(z.imag());
    }
    std::vector<i64> counts(q);
    for (int t = 0; t < q; ++t)
        counts[t] = round_count(re[t].sum, im[t].sum, "nu direct, t = " + std::to_string(t));
    return counts;
}

std::vector<i64> nu_spectral(const Space& sp, const PointSet& E, int k) {
    const int q = sp.field().q();
    const i64 n = sp.npoints();
    auto ehat = hat_ld(sp, E);
    std::vector<cld> w(ehat.size());
    for (std::size_t m = 0; m < ehat.size(); ++m) w[m] = pow_int(std::conj(ehat[m]), k);
    const long double qdk = powl(static_cast<long double>(n), k);
    std::vector<i64> counts(q);
    for (int t = 0; t < q; ++t) {
        const auto& sh = sp.sphere_hat(t);
        KahanComplex<long double> acc;
        for (i64 m = 0; m < n; ++m)
            acc.add(sh[static_cast<std::size_t>(m)] * w[static_cast<std::size_t>(m)]);
        const cld v = acc.value();
        counts[t] =
            round_count(qdk * v.real(), qdk * v.imag(), "nu spectral, t = " + std::to_string(t));
    }
    return counts;
}

} // namespace

NuProfile nu_profile(const Space& sp, const PointSet& E, int k, NuMethod method) {
    if (k < 2) throw BadSpec("nu requires k >= 2, got " + std::to_string(k));
    const i64 total = checked_pow_size(E.size(), k);

    std::vector<i64> direct, spectral;
    if (method == NuMethod::Direct || method == NuMethod::Both) direct = nu_direct(sp, E, k);
    if (method == NuMethod::Spectral || method == NuMethod::Both) spectral = nu_spectral(sp, E, k);
    if (method == NuMethod::Both && direct != spectral) {
        int t = 0;
        while (direct[t] == spectral[t]) ++t;
        throw RoundingOverflow("direct/spectral profiles disagree at t = " + std::to_string(t) +
                               ": " + std::to_string(direct[t]) + " vs " +
                               std::to_string(spectral[t]));
    }

    NuProfile out;
    out.k = k;
    out.set_size = E.size();
    out.counts = method == NuMethod::Spectral ? std::move(spectral) : std::move(direct);

    u128 mass = 0;
    for (i64 c : out.counts) mass += static_cast<u128>(c);
    if (mass != static_cast<u128>(total))
        throw RoundingOverflow("profile mass differs from |E|^k = " + std::to_string(total));
    return out;
}

SignSweep sign_sweep(const Space& sp, const PointSet& E, int k) {
    if (k < 2) throw BadSpec("sign sweep requires k >= 2, got " + std::to_string(k));
    if (E.size() == 0) throw DegenerateSet("sign sweep needs a nonempty set");
    checked_pow_size(E.size(), k);

    const int q = sp.field().q();
    const i64 n = sp.npoints();
    const auto& norm_of = sp.spheres().norm_of;
    auto tilde = sp.plan().apply<long double>(indicator_ld(sp, E), TransformMode::Tilde);
    const long double scale = 1.0L / static_cast<long double>(n);

    SignSweep out;
    out.k = k;
    const int patterns = 1 << (k - 1);
    for (int pat = 0; pat < patterns; ++pat) {
        std::vector<cld> w(tilde.size());
        for (std::size_t m = 0; m < tilde.size(); ++m) {
            cld acc = tilde[m]; // position 1 always carries +
            for (int j = 0; j < k - 1; ++j)
                acc *= (pat >> j & 1) ? std::conj(tilde[m]) : tilde[m];
            w[m] = acc;
        }
        auto conv = sp.plan().apply<long double>(std::move(w), TransformMode::Inverse);
        std::vector<char> present(q, 0);
        for (i64 y = 0; y < n; ++y)
            if (conv[static_cast<std::size_t>(y)].real() * scale >= 0.5L)
                present[norm_of[static_cast<std::size_t>(y)]] = 1;
        out.cardinality.push_back(std::count(present.begin(), present.end(), 1));
    }
    out.min_cardinality = *std::min_element(out.cardinality.begin(), out.cardinality.end());
    out.max_cardinality = *std::max_element(out.cardinality.begin(), out.cardinality.end());
    return out;
}

DeltaReport delta_report(const Space& sp, const PointSet& E, int k, const NuProfile* precomputed) {
    if (E.size() == 0) throw DegenerateSet("delta report needs a nonempty set");

    NuProfile local;
    const NuProfile* nu = precomputed;
    if (nu == nullptr || nu->k != k || nu->set_size != E.size()) {
        local = nu_profile(sp, E, k, NuMethod::Both);
        nu = &local;
    }

    const int q = sp.field().q();
    const int d = sp.d();
    const i64 total = checked_pow_size(E.size(), k);

    DeltaReport rep;
    rep.nu0 = nu->counts[0];
    for (int t = 0; t < q; ++t)
        if (nu->counts[t] > 0) rep.delta_members.push_back(t);
    rep.cardinality = static_cast<i64>(rep.delta_members.size());

    // (|E|^k - nu0)^2 / sum_{t != 0} nu^2, compared in integers: both the
    // numerator and the denominator are < 2^126 because |E|^k < 2^63.
    const u128 diff = static_cast<u128>(total - rep.nu0);
    const u128 num = diff * diff;
    u128 den = 0;
    for (int t = 1; t < q; ++t)
        den += static_cast<u128>(nu->counts[t]) * static_cast<u128>(nu->counts[t]);
    if (den == 0) {
        rep.lower_bound_r41 = 0.0; // all mass sits on t = 0, so num = 0 too
        rep.r41_exact_ok = true;
    } else {
        rep.lower_bound_r41 =
            static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
        const u128 quot = num / den;
        const u128 rem = num % den;
        const u128 card = static_cast<u128>(rep.cardinality);
        rep.r41_exact_ok = card > quot || (card == quot && rem == 0);
    }

    rep.lemma41_hypothesis_met =
        d % 2 == 0 && static_cast<u128>(E.size()) * static_cast<u128>(E.size()) >=
                          static_cast<u128>(9) * static_cast<u128>(sp.npoints());

    auto ehat = hat_ld(sp, E);
    const auto& spheres = sp.spheres();
    long double maxmom = 0.0L;
    for (int r = 1; r < q; ++r) {
        KahanSum<long double> s;
        for (i64 v : spheres.members[r])
            s.add(powl(std::abs(ehat[static_cast<std::size_t>(v)]), static_cast<long double>(k)));
        maxmom = std::max(maxmom, s.sum);
    }
    const long double qdk = powl(static_cast<long double>(sp.npoints()), k);
    const long double ek1 = powl(static_cast<long double>(E.size()), k + 1);
    const long double bound =
        maxmom <= 0.0L ? static_cast<long double>(q)
                       : std::min(static_cast<long double>(q), ek1 / (qdk * maxmom));
    rep.lemma41_bound = static_cast<double>(bound);
    rep.ratio_actual_over_bound =
        bound > 0.0L ? static_cast<double>(static_cast<long double>(rep.cardinality) / bound) : 0.0;
    return rep;
}

AuditReport lemma_audit(const Space& sp, const PointSet& E, int k, double tolerance,
                        const NuProfile* precomputed) {
    if (k < 2) throw BadSpec("lemma audit requires k >= 2, got " + std::to_string(k));

    NuProfile local;
    const NuProfile* nu = precomputed;
    if (nu == nullptr || nu->k != k || nu->set_size != E.size()) {
        local = nu_profile(sp, E, k, NuMethod::Both);
        nu = &local;
    }

    const int q = sp.field().q();
    const int d = sp.d();
    const i64 n = sp.npoints();
    const i64 total = checked_pow_size(E.size(), k);
    const bool even_d = d % 2 == 0;
    const u128 size_sq = static_cast<u128>(E.size()) * static_cast<u128>(E.size());

    auto ehat = hat_ld(sp, E);
    const auto& spheres = sp.spheres();

    AuditReport rep;
    auto push = [&rep](std::string name, bool hyp, long double lhs, long double rhs, bool pass) {
        AuditRecord rec;
        rec.name = std::move(name);
        rec.hypothesis_met = hyp;
        rec.lhs = static_cast<double>(lhs);
        rec.rhs = static_cast<double>(rhs);
        rec.pass = hyp ? pass : true;
        rec.slack_ratio = rhs != 0.0L ? static_cast<double>(lhs / rhs) : (lhs == 0.0L ? 0.0 : std::numeric_limits<double>::infinity());
        rep.records.push_back(std::move(rec));
    };

    // sum_m |Ehat(m)|^k <= |E|^{k-1} / q^{d(k-1)}, no hypothesis.
    {
        KahanSum<long double> lhs;
        for (const cld& z : ehat) lhs.add(powl(std::abs(z), static_cast<long double>(k)));
        const long double rhs =
            powl(static_cast<long double>(E.size()) / static_cast<long double>(n), k - 1);
        push("moment_sum_bound_k" + std::to_string(k), true, lhs.sum, rhs, lhs.sum <= rhs * (1.0L + tolerance) + tolerance);
    }

    // Per-sphere sums of Ehat^k feed the second-moment bound and the gap bound.
    std::vector<cld> sphere_pow_sum(q);
    for (int r = 0; r < q; ++r) {
        KahanComplex<long double> s;
        for (i64 v : spheres.members[r]) s.add(pow_int(ehat[static_cast<std::size_t>(v)], k));
        sphere_pow_sum[r] = s.value();
    }

    const long double total_sq = static_cast<long double>(total) * static_cast<long double>(total);
    const u128 diff = static_cast<u128>(total - nu->counts[0]);
    const u128 diff_sq = diff * diff;

    // sum_t nu^2 <= q^{-1}|E|^{2k} + q^{2dk-d} sum_r |sum_{v in S_r} Ehat(v)^k|^2; d >= 2.
    {
        u128 lhs_int = 0;
        for (i64 c : nu->counts) lhs_int += static_cast<u128>(c) * static_cast<u128>(c);
        const long double lhs = static_cast<long double>(lhs_int);
        const long double qpow = powl(static_cast<long double>(q), 2 * d * k - d);
        KahanSum<long double> tail;
        for (int r = 0; r < q; ++r) tail.add(std::norm(sphere_pow_sum[r]));
        const long double rhs = total_sq / q + qpow * tail.sum;
        push("nu_l2_bound_k" + std::to_string(k), d >= 2, lhs, rhs,
             lhs <= rhs * (1.0L + tolerance) + tolerance);
    }

    // (|E|^k - nu0)^2 >= |E|^{2k}/9 for even d and |E| >= 3 q^{d/2}; stored
    // as lhs = |E|^{2k}/9 <= rhs = (|E|^k - nu0)^2, decided in integers.
    {
        const bool hyp = even_d && size_sq >= static_cast<u128>(9) * static_cast<u128>(n);
        const u128 total_sq_int = static_cast<u128>(total) * static_cast<u128>(total);
        const u128 quot = total_sq_int / 9;
        const u128 rem = total_sq_int % 9;
        const bool pass = diff_sq >= quot + (rem != 0 ? 1 : 0);
        push("nonzero_mass_k" + std::to_string(k), hyp, total_sq / 9.0L,
             static_cast<long double>(diff_sq), pass);
    }

    // q^{2dk-d} |sum_{m in S_0} Ehat(m)^k|^2 - nu0^2 <= 4 q^{-1} |E|^{2k}
    // for even d and |E| >= q^{d/2}.
    {
        const bool hyp = even_d && size_sq >= static_cast<u128>(n);
        const long double qpow = powl(static_cast<long double>(q), 2 * d * k - d);
        const long double nu0 = static_cast<long double>(nu->counts[0]);
        const long double lhs = qpow * std::norm(sphere_pow_sum[0]) - nu0 * nu0;
        const long double rhs = 4.0L * total_sq / q;
        push("zero_sphere_gap_k" + std::to_string(k), hyp, lhs, rhs,
             lhs <= rhs * (1.0L + tolerance) + tolerance);
    }

    // nu_k(0) = q^{-1}|E|^k + q^{dk-d-1} G^d sum_m (conj Ehat(m))^k (q [||m||=0] - 1),
    // restructured as q * (S_0 sum) - (full sum); even d so G^d is the exact
    // integer (eta(-1) q)^{d/2}. Recorded as |counted - spectral| <= tol * q^d.
    {
        KahanComplex<long double> full;
        for (const cld& z : ehat) full.add(pow_int(std::conj(z), k));
        KahanComplex<long double> zero;
        for (i64 m : spheres.members[0])
            zero.add(pow_int(std::conj(ehat[static_cast<std::size_t>(m)]), k));
        long double lhs = 0.0L, rhs = tolerance * static_cast<long double>(n);
        bool pass = true;
        if (even_d) {
            const long double gd = static_cast<long double>(sp.field().gauss_pow_even(d));
            const long double qpow = powl(static_cast<long double>(q), d * k - d - 1);
            const cld spectral = static_cast<long double>(total) / q +
                                 qpow * gd *
                                     (static_cast<long double>(q) * zero.value() - full.value());
            lhs = std::abs(spectral - cld(static_cast<long double>(nu->counts[0]), 0.0L));
            pass = lhs <= rhs;
        }
        push("nu0_spectral_identity_k" + std::to_string(k), even_d, lhs, rhs, pass);
    }

    return rep;
}

Rational theorem_exponents(int d, Theorem which) {
    if (d % 2 != 0)
        throw BadDimension("threshold exponents are stated for even d, got " + std::to_string(d));
    if (which == Theorem::T13) {
        if (d < 4) throw BadDimension("T1.3 needs d >= 4, got " + std::to_string(d));
        const Rational direct = Rational(d + 1, 2) - Rational(1, 6 * d + 2);
        const Rational folded(static_cast<std::int64_t>(3) * d * d + 4 * d, 6 * d + 2);
        if (direct != folded) throw BadSpec("threshold fraction mismatch for T1.3");
        return direct;
    }
    if (d < 8) throw BadDimension("T1.4 needs d >= 8, got " + std::to_string(d));
    const Rational direct = Rational(d + 1, 2) - Rational(1, 9 * d - 18);
    const Rational folded(static_cast<std::int64_t>(9) * d * d - 9 * d - 20, 18 * d - 36);
    if (direct != folded) throw BadSpec("threshold fraction mismatch for T1.4");
    return direct;
}

} // namespace fqmag
