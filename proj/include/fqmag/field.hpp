#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fqmag/errors.hpp"

namespace fqmag {

using cd = std::complex<double>;

// Default cap on q = p^n; large enough for F_121 lookup tables (q^2 entries).
inline constexpr int kDefaultFieldCap = 121;

// F_q = F_{p^n}, p an odd prime. Elements are canonical indices in [0, q):
// index(a) = sum_i coeffs[i] * p^i for the coefficient vector of a in the
// power basis of the modulus. The prime subfield is exactly the indices < p.
struct FieldSpec {
    int p = 0;
    int n = 0;
    int q = 0;
    // Monic degree-n modulus, constant coefficient first, length n+1
    // (last entry 1). Selection is the lexicographically least monic
    // irreducible so indices are reproducible across runs and machines.
    std::vector<int> modulus;
};

struct ArithTables {
    std::vector<int> add;       // q*q, row-major a*q+b
    std::vector<int> mul;       // q*q
    std::vector<int> neg;       // q
    std::vector<int> inv;       // q; inv[0] = 0 is a dead slot (1/0 undefined)
    std::vector<int> trace;     // q, values in [0, p)
    std::vector<int> frobenius; // q, a -> a^p
};

struct CharacterTable {
    std::vector<cd> chi; // chi(a) = exp(2*pi*i * trace(a) / p)
    std::vector<int> eta; // quadratic character: 0 at 0, +1 on squares, -1 otherwise
    cd gauss;             // G = sum_{s != 0} eta(s) chi(s)
};

class Field {
public:
    const FieldSpec& spec() const { return spec_; }
    const ArithTables& tables() const { return tab_; }
    const CharacterTable& chars() const { return chr_; }

    int p() const { return spec_.p; }
    int n() const { return spec_.n; }
    int q() const { return spec_.q; }

    int add(int a, int b) const { return tab_.add[static_cast<std::size_t>(a) * spec_.q + b]; }
    int mul(int a, int b) const { return tab_.mul[static_cast<std::size_t>(a) * spec_.q + b]; }
    int neg(int a) const { return tab_.neg[a]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int inv(int a) const;                  // throws BadSpec at 0
    int pow(int a, std::int64_t e) const;  // 0^0 = 1 by convention
    int trace(int a) const { return tab_.trace[a]; }
    int frobenius(int a) const { return tab_.frobenius[a]; }

    const cd& chi(int a) const { return chr_.chi[a]; }
    cd chi_twisted(int twist, int a) const { return chr_.chi[mul(twist, a)]; }
    int eta(int a) const { return chr_.eta[a]; }
    const cd& gauss() const { return chr_.gauss; }

    // G^d for even d is exactly (eta(-1) * q)^(d/2); kept in integer
    // arithmetic so sphere-transform closed forms carry no float drift.
    double gauss_pow_even(int d) const;

private:
    friend Field make_field(int p, int n, int q_cap);
    FieldSpec spec_;
    ArithTables tab_;
    CharacterTable chr_;
};

// Constructs F_{p^n} with full tables. Throws CharTwo, NotPrime, TooLarge.
Field make_field(int p, int n, int q_cap = kDefaultFieldCap);

// eta(a): +1 iff a is a nonzero square, -1 iff a nonsquare, 0 at a = 0.
int quadratic_character(const Field& f, int a);

// chi(twist * a). Throws TrivialTwist when twist = 0 and the caller needs a
// nontrivial character (the default).
cd additive_character(const Field& f, int a, int twist = 1, bool require_nontrivial = true);

// G = sum_{s != 0} eta(s) chi(s); satisfies |G|^2 = q and G^2 = eta(-1) q.
cd gauss_sum(const Field& f);

// K(a,b) = sum_{l != 0} chi(a l + b / l). Real by the l <-> -l pairing.
double kloosterman_sum(const Field& f, int a, int b);

} // namespace fqmag
