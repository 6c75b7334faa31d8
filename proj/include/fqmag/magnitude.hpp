#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqmag/rational.hpp"
#include "fqmag/space.hpp"

namespace fqmag {

struct NuProfile {
    int k = 0;
    std::vector<std::int64_t> counts; // length q, counts[t] = nu_k(t)
    std::int64_t set_size = 0;
};

enum class NuMethod { Direct, Spectral, Both };

// nu_k(t) = #{(x_1..x_k) in E^k : ||x_1+...+x_k|| = t}. Direct: tilde(E)^k
// inverted and rounded. Spectral: q^{dk} sum_m shat_t(m) conj(Ehat(m))^k.
// Both computes the two and demands identical integers.
NuProfile nu_profile(const Space& sp, const PointSet& E, int k,
                     NuMethod method = NuMethod::Both);

// Cardinality of {||s_1 x_1 + ... + s_k x_k||} for every sign pattern;
// pattern bit j set means position j+2 carries a minus (position 1 is
// always plus). Exploratory: no cross-pattern equality is claimed.
struct SignSweep {
    int k = 0;
    std::vector<std::int64_t> cardinality; // 2^{k-1} entries
    std::int64_t min_cardinality = 0;
    std::int64_t max_cardinality = 0;
};

SignSweep sign_sweep(const Space& sp, const PointSet& E, int k);

struct DeltaReport {
    std::vector<int> delta_members; // support of nu_k
    std::int64_t cardinality = 0;
    std::int64_t nu0 = 0;
    double lower_bound_r41 = 0.0;  // (|E|^k - nu0)^2 / sum_{t!=0} nu^2
    bool r41_exact_ok = false;     // cardinality >= bound, checked in integers
    bool lemma41_hypothesis_met = false; // even d and |E| >= 3 q^{d/2}
    double lemma41_bound = 0.0;    // min(q, |E|^{k+1}/(q^{dk} max moment)); tracked only
    double ratio_actual_over_bound = 0.0;
};

DeltaReport delta_report(const Space& sp, const PointSet& E, int k,
                         const NuProfile* precomputed = nullptr);

struct AuditRecord {
    std::string name;
    bool hypothesis_met = true;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true; // pass iff lhs <= rhs whenever hypothesis_met
    double slack_ratio = 0.0;
};

struct AuditReport {
    std::vector<AuditRecord> records;
};

// Constant-free count-profile audits: the moment bound
// sum_m |Ehat|^j <= |E|^{j-1}/q^{dj-d} for j in {2..5}, the second-moment
// bound on sum_t nu^2, the nonzero-mass bound (|E|^k - nu0)^2 >= |E|^{2k}/9,
// the zero-sphere gap bound, and the spectral identity for nu_k(0).
AuditReport lemma_audit(const Space& sp, const PointSet& E, int k,
                        double tolerance = 1e-8, const NuProfile* precomputed = nullptr);

enum class Theorem { T13, T14 };

// Size thresholds guaranteeing |Delta_k| ~ q, as exact rationals:
// T13 -> (d+1)/2 - 1/(6d+2) for even d >= 4, T14 -> (d+1)/2 - 1/(9d-18)
// for even d >= 8; each is checked against its single-fraction form
// (3d^2+4d)/(6d+2) resp. (9d^2-9d-20)/(18d-36) before being returned.
Rational theorem_exponents(int d, Theorem which);

} // namespace fqmag
