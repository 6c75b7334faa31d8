#include "fqmag/field.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

namespace fqmag {
namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; static_cast<std::int64_t>(d) * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

using Poly = std::vector<int>; // coefficients mod p, constant first, no trailing-zero guarantee

int degree(const Poly& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

int inv_mod(int a, int p) {
    a %= p;
    for (int b = 1; b < p; ++b)
        if (a * b % p == 1) return b;
    return 0;
}

// Remainder of a by monic-leading b over Z_p.
Poly poly_rem(Poly a, const Poly& b, int p) {
    int db = degree(b);
    int lead_inv = inv_mod(b[db], p);
    for (int da = degree(a); da >= db; da = degree(a)) {
        int c = a[da] * lead_inv % p;
        for (int i = 0; i <= db; ++i) {
            int& slot = a[da - db + i];
            slot = ((slot - c * b[i]) % p + p) % p;
        }
    }
    return a;
}

// True iff the monic polynomial m (degree n) has no monic factor of
// degree 1..n/2; equivalent to irreducibility over Z_p.
bool is_irreducible(const Poly& m, int p) {
    int n = degree(m);
    for (int deg = 1; deg <= n / 2; ++deg) {
        std::int64_t count = 1;
        for (int i = 0; i < deg; ++i) count *= p;
        for (std::int64_t v = 0; v < count; ++v) {
            Poly f(deg + 1, 0);
            std::int64_t t = v;
            for (int i = 0; i < deg; ++i) { f[i] = static_cast<int>(t % p); t /= p; }
            f[deg] = 1;
            if (degree(poly_rem(m, f, p)) < 0) return false;
        }
    }
    return true;
}

Poly least_irreducible(int p, int n) {
    std::int64_t count = 1;
    for (int i = 0; i < n; ++i) count *= p;
    for (std::int64_t v = 0; v < count; ++v) {
        Poly m(n + 1, 0);
        std::int64_t t = v;
        for (int i = 0; i < n; ++i) { m[i] = static_cast<int>(t % p); t /= p; }
        m[n] = 1;
        if (is_irreducible(m, p)) return m;
    }
    assert(false && "no irreducible of requested degree");
    return {};
}

Poly decode(int idx, int p, int n) {
    Poly c(n, 0);
    for (int i = 0; i < n; ++i) { c[i] = idx % p; idx /= p; }
    return c;
}

int encode(const Poly& c, int p, int n) {
    int idx = 0;
    for (int i = n - 1; i >= 0; --i) idx = idx * p + (i < static_cast<int>(c.size()) ? c[i] : 0);
    return idx;
}

} // namespace

int Field::inv(int a) const {
    if (a == 0) throw BadSpec("inverse of zero requested");
    return tab_.inv[a];
}

int Field::pow(int a, std::int64_t e) const {
    assert(e >= 0);
    int acc = 1, base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        base = mul(base, base);
        e >>= 1;
    }
    return acc;
}

double Field::gauss_pow_even(int d) const {
    if (d % 2 != 0) throw OddDimension("G^d is rational only for even d, got " + std::to_string(d));
    double base = static_cast<double>(eta(neg(1)) * q());
    double acc = 1.0;
    for (int i = 0; i < d / 2; ++i) acc *= base;
    return acc;
}

Field make_field(int p, int n, int q_cap) {
    if (p == 2) throw CharTwo("characteristic two is outside the engine's domain");
    if (!is_prime(p)) throw NotPrime("p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw BadSpec("extension degree must be >= 1");
    std::int64_t q64 = 1;
    for (int i = 0; i < n; ++i) {
        q64 *= p;
        if (q64 > q_cap)
            throw TooLarge("q = p^n exceeds cap " + std::to_string(q_cap));
    }
    int q = static_cast<int>(q64);

    Field f;
    f.spec_ = {p, n, q, least_irreducible(p, n)};
    const Poly& mod = f.spec_.modulus;

    auto& t = f.tab_;
    t.add.resize(static_cast<std::size_t>(q) * q);
    t.mul.resize(static_cast<std::size_t>(q) * q);
    t.neg.resize(q);
    t.inv.assign(q, 0);
    t.trace.resize(q);
    t.frobenius.resize(q);

    for (int a = 0; a < q; ++a) {
        Poly ca = decode(a, p, n);
        Poly na(n);
        for (int i = 0; i < n; ++i) na[i] = (p - ca[i]) % p;
        t.neg[a] = encode(na, p, n);
        for (int b = 0; b < q; ++b) {
            Poly cb = decode(b, p, n);
            Poly s(n);
            for (int i = 0; i < n; ++i) s[i] = (ca[i] + cb[i]) % p;
            t.add[static_cast<std::size_t>(a) * q + b] = encode(s, p, n);
            Poly prod(2 * n - 1, 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            Poly r = n > 1 ? poly_rem(prod, mod, p) : prod;
            t.mul[static_cast<std::size_t>(a) * q + b] = encode(r, p, n);
        }
    }

    for (int a = 1; a < q; ++a)
        for (int b = 1; b < q; ++b)
            if (t.mul[static_cast<std::size_t>(a) * q + b] == 1) { t.inv[a] = b; break; }

    for (int a = 0; a < q; ++a) t.frobenius[a] = f.pow(a, p);
    for (int a = 0; a < q; ++a) {
        int acc = a, x = a;
        for (int j = 1; j < n; ++j) {
            x = t.frobenius[x];
            acc = t.add[static_cast<std::size_t>(acc) * q + x];
        }
        assert(acc < p && "trace lands in the prime subfield");
        t.trace[a] = acc;
    }

    auto& c = f.chr_;
    c.chi.resize(q);
    for (int a = 0; a < q; ++a)
        c.chi[a] = std::polar(1.0, 2.0 * std::numbers::pi * t.trace[a] / p);
    c.eta.assign(q, -1);
    c.eta[0] = 0;
    for (int a = 1; a < q; ++a) c.eta[t.mul[static_cast<std::size_t>(a) * q + a]] = 1;
    c.gauss = 0.0;
    for (int s = 1; s < q; ++s) c.gauss += static_cast<double>(c.eta[s]) * c.chi[s];
    return f;
}

int quadratic_character(const Field& f, int a) { return f.eta(a); }

cd additive_character(const Field& f, int a, int twist, bool require_nontrivial) {
    if (twist == 0 && require_nontrivial)
        throw TrivialTwist("twist 0 gives the trivial character");
    return f.chi(f.mul(twist, a));
}

cd gauss_sum(const Field& f) { return f.gauss(); }

double kloosterman_sum(const Field& f, int a, int b) {
    cd acc = 0.0;
    for (int l = 1; l < f.q(); ++l)
        acc += f.chi(f.add(f.mul(a, l), f.mul(b, f.inv(l))));
    return acc.real();
}

} // namespace fqmag
