#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqmag/rational.hpp"
#include "fqmag/space.hpp"

namespace fqmag {

struct MomentTable {
    int k = 0;
    std::vector<double> per_t;   // sum_{v in S_t} |Ehat(v)|^k, length q
    double max_nonzero_t = 0.0;  // max of per_t over t != 0
    int argmax_t = 0;
};

MomentTable sphere_moment(const Space& sp, const PointSet& E, int k);

// A tracked "lhs <= C * rhs" statement: the constant is measured, never
// asserted. log_slack normalizes by log q for statements that permit
// logarithmic slack.
struct ConstantReport {
    std::string lemma;
    bool hypothesis_met = true;
    double measured_lhs = 0.0;
    double bound_rhs_without_constant = 0.0;
    double implied_constant = 0.0;
    double log_slack = 0.0;
};

enum class RestrictionLemma { L32, L33 };

// Exact exponent arithmetic for the two moment bounds.
Rational lemma32_threshold(int d);         // (12d-8)/(3d+4), the k gate
Rational lemma32_e_exponent(int d, int k); // ((3k-3)d+4k+2)/(3d+4)
int lemma32_q_exponent(int d, int k);      // d - dk - 1
Rational lemma33_q_exponent(int d);        // (-27d^2+75d+12)/(12d-32)
Rational lemma33_e_exponent(int d);        // (15d-46)/(6d-16)
Rational holder_theta(int d);              // (6d-4)/(9d-24)

// max_{t != 0} sum_{v in S_t} |Ehat(v)|^k against its power bound. L32
// needs even d >= 4 and k above the threshold; L33 needs even d >= 8,
// k = 3, and |E| >= q^{(d-1)/2}. Violations throw HypothesisFail naming
// the condition.
ConstantReport restriction_ratio(const Space& sp, const PointSet& E, int k,
                                 RestrictionLemma lemma);

struct L2EnergyReport {
    int t = 0;
    ConstantReport energy;     // sum_{x in S_t} |Etilde(x)|^2 vs q^{(d-1)/2}|E|^2
    ConstantReport surface_l2; // ||Etilde||_{L^2(S_t,dsigma)} vs q^{(1-d)/4}|E|
    // The expansion sum_{x in S_t} |Etilde(x)|^2 = q^d sum_{m,m' in E} shat_t(m-m'),
    // checked as an identity.
    double identity_lhs = 0.0;
    double identity_rhs = 0.0;
    double identity_abs_diff = 0.0;
    double identity_budget = 0.0;
    bool identity_pass = false;
};

L2EnergyReport l2_sphere_energy(const Space& sp, const PointSet& E, int t,
                                double tolerance = 1e-8);

// All radii t = 1..q-1 off one shared difference-count pass over E x E.
std::vector<L2EnergyReport> l2_sphere_energy_all(const Space& sp, const PointSet& E,
                                                 double tolerance = 1e-8);

struct HolderReport {
    Rational theta;
    bool exponent_identity_ok = false; // 1/3 = (1-theta)/2 + (3d+4)theta/(12d-8), exact
    double norm_triple = 0.0;          // ||Etilde||_{L^3(S_t,dsigma)}
    double norm_square = 0.0;          // ||Etilde||_{L^2(S_t,dsigma)}
    double norm_upper = 0.0;           // ||Etilde||_{L^{(12d-8)/(3d+4)}(S_t,dsigma)}
    bool pass = false;                 // norm_triple <= norm_square^{1-theta} norm_upper^theta
    ConstantReport report;             // same inequality as a tracked ratio
};

HolderReport holder_chain(const Space& sp, const PointSet& E, int t,
                          double tolerance = 1e-8);

// Empirical lower bound on the extension constant: over seeded subsets of
// S_t at densities {1/|S_t|, 0.1, 0.5, 1.0} cycled across trials, the max of
// ||(E dsigma)^vee||_{L^4(dm)} / ||E||_{L^{(12d-8)/(9d-12)}(S_t,dsigma)}.
ConstantReport extension_constant(const Space& sp, int t, int trials, std::uint64_t seed);

} // namespace fqmag
