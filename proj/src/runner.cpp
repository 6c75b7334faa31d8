#include "fqmag/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <thread>
#include <utility>

#include "fqmag/errors.hpp"
#include "fqmag/kahan.hpp"
#include "fqmag/magnitude.hpp"
#include "fqmag/restriction.hpp"

namespace fqmag {

namespace {

using i64 = std::int64_t;
using u64 = std::uint64_t;

u64 splitmix_step(u64& state) {
    state += 0x9e3779b97f4a7c15ULL;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed derivation independent of thread schedule.
u64 mix64(u64 a, u64 b) {
    u64 state = a ^ (b * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return splitmix_step(state);
}

u64 bounded(u64& state, u64 n) {
    const u64 reject_below = (0 - n) % n;
    for (;;) {
        const u64 r = splitmix_step(state);
        if (r >= reject_below) return r % n;
    }
}

// Uniform in [-1, 1], built from the raw generator so tables are portable.
double unit_double(u64& state) {
    return 2.0 * (static_cast<double>(splitmix_step(state) >> 11) / 9007199254740992.0) - 1.0;
}

bool has_check(const ExperimentConfig& cfg, const std::string& name) {
    return std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end();
}

double ratio_of(double lhs, double rhs) {
    if (rhs != 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

// Runs one check body; a HypothesisFail becomes a single skipped row, any
// other typed error a single fail row, so one breach cannot hide others.
void run_check(std::vector<ReportRow>& out, const ReportRow& base, const std::string& label,
               bool timing, const std::function<std::vector<ReportRow>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ReportRow> rows;
    try {
        rows = body();
    } catch (const HypothesisFail&) {
        ReportRow r = base;
        r.check = label;
        r.hypothesis_met = false;
        r.status = "skipped";
        rows = {std::move(r)};
    } catch (const Error&) {
        ReportRow r = base;
        r.check = label;
        r.status = "fail";
        rows = {std::move(r)};
    }
    double sec = 0.0;
    if (timing) {
        const auto t1 = std::chrono::steady_clock::now();
        sec = std::chrono::duration<double>(t1 - t0).count();
    }
    for (auto& r : rows) {
        r.seconds = sec;
        out.push_back(std::move(r));
    }
}

// Profiles are shared across the audits of one set; failures must not be
// cached so every dependent check reports the breach itself.
struct SetContext {
    const Space& sp;
    const PointSet& E;
    std::map<int, NuProfile> profiles;

    const NuProfile& profile(int k) {
        auto it = profiles.find(k);
        if (it == profiles.end())
            it = profiles.emplace(k, nu_profile(sp, E, k, NuMethod::Both)).first;
        return it->second;
    }
};

std::vector<ReportRow> identities_rows(const Space& sp, const ExperimentConfig& cfg,
                                       const ReportRow& base, std::size_t pidx) {
    const int q = sp.field().q();
    const int d = sp.d();
    const i64 n = sp.npoints();
    std::vector<ReportRow> rows;

    { // closed-form sphere spectrum vs the direct transform (even d)
        ReportRow r = base;
        r.check = "identities/sphere_spectrum_closed_form";
        if (d % 2 != 0) {
            r.hypothesis_met = false;
            r.status = "skipped";
        } else {
            long double maxerr = 0.0L;
            auto probe = [&sp, &maxerr](int t, i64 m) {
                const cd closed = sphere_hat_closed(sp, t, m);
                const auto& direct = sp.sphere_hat(t);
                const long double err =
                    std::abs(static_cast<std::complex<long double>>(closed) -
                             std::complex<long double>(direct[static_cast<std::size_t>(m)], 0.0L));
                maxerr = std::max(maxerr, err);
            };
            if (static_cast<i64>(q) * n <= 200000) {
                for (int t = 0; t < q; ++t)
                    for (i64 m = 0; m < n; ++m) probe(t, m);
            } else {
                u64 state = mix64(cfg.master_seed, 0xA1 + pidx);
                for (int i = 0; i < 1000; ++i)
                    probe(static_cast<int>(bounded(state, static_cast<u64>(q))),
                          static_cast<i64>(bounded(state, static_cast<u64>(n))));
            }
            r.lhs = static_cast<double>(maxerr);
            r.rhs = cfg.tolerance * q;
            r.status = r.lhs <= r.rhs ? "pass" : "fail";
            r.ratio = ratio_of(r.lhs, r.rhs);
        }
        rows.push_back(std::move(r));
    }

    { // sum_t shat_t(m) conj(shat_t(v)) against its closed form
        long double maxerr = 0.0L;
        auto probe = [&sp, &maxerr](i64 m, i64 v) {
            const auto [lhs, rhs] = dual_sum_identity(sp, m, v);
            maxerr = std::max(maxerr, static_cast<long double>(std::abs(lhs - rhs)));
        };
        if (n <= 81) {
            for (i64 m = 0; m < n; ++m)
                for (i64 v = 0; v < n; ++v) probe(m, v);
        } else {
            u64 state = mix64(cfg.master_seed, 0xB2 + pidx);
            for (int i = 0; i < 1000; ++i)
                probe(static_cast<i64>(bounded(state, static_cast<u64>(n))),
                      static_cast<i64>(bounded(state, static_cast<u64>(n))));
        }
        ReportRow r = base;
        r.check = "identities/dual_sum_identity";
        r.lhs = static_cast<double>(maxerr);
        r.rhs = cfg.tolerance * q;
        r.status = r.lhs <= r.rhs ? "pass" : "fail";
        r.ratio = ratio_of(r.lhs, r.rhs);
        rows.push_back(std::move(r));
    }

    { // Plancherel and inversion over 100 seeded complex tables
        u64 state = mix64(cfg.master_seed, 0xC3 + pidx);
        long double plerr = 0.0L, inverr = 0.0L;
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<cd> f(static_cast<std::size_t>(n));
            for (auto& z : f) z = cd(unit_double(state), unit_double(state));
            auto fh = sp.plan().apply<double>(f, TransformMode::Hat);
            KahanSum<long double> hat2, raw2;
            for (const auto& z : fh) hat2.add(std::norm(z));
            for (const auto& z : f) raw2.add(std::norm(z));
            plerr = std::max(plerr, std::fabs(hat2.sum - raw2.sum / n));
            auto finv = sp.plan().apply<double>(std::move(fh), TransformMode::Inverse);
            for (i64 i = 0; i < n; ++i)
                inverr = std::max(inverr, static_cast<long double>(std::abs(
                                              finv[static_cast<std::size_t>(i)] -
                                              f[static_cast<std::size_t>(i)])));
        }
        const double budget = cfg.tolerance * std::max<double>(1.0, static_cast<double>(n));
        ReportRow r = base;
        r.check = "identities/plancherel";
        r.lhs = static_cast<double>(plerr);
        r.rhs = budget;
        r.status = r.lhs <= r.rhs ? "pass" : "fail";
        r.ratio = ratio_of(r.lhs, r.rhs);
        rows.push_back(r);
        r = base;
        r.check = "identities/inversion_roundtrip";
        r.lhs = static_cast<double>(inverr);
        r.rhs = budget;
        r.status = r.lhs <= r.rhs ? "pass" : "fail";
        r.ratio = ratio_of(r.lhs, r.rhs);
        rows.push_back(std::move(r));
    }

    { // (dsigma)^vee(m) = (q^d/|S_t|) shat_t(m) for the constant function
        long double maxerr = 0.0L;
        const auto& spheres = sp.spheres();
        for (int t = 0; t < q; ++t) {
            if (spheres.sizes[t] == 0) continue;
            std::vector<cd> ones(static_cast<std::size_t>(spheres.sizes[t]), cd(1.0, 0.0));
            const SpectralTable ext = extension_fn(sp, ones, t);
            const auto& sh = sp.sphere_hat(t);
            const double scale = static_cast<double>(n) / static_cast<double>(spheres.sizes[t]);
            for (i64 m = 0; m < n; ++m) {
                const cd want(scale * static_cast<double>(sh[static_cast<std::size_t>(m)]), 0.0);
                maxerr = std::max(maxerr, static_cast<long double>(std::abs(
                                              ext.values[static_cast<std::size_t>(m)] - want)));
            }
        }
        ReportRow r = base;
        r.check = "identities/extension_of_surface_measure";
        r.lhs = static_cast<double>(maxerr);
        r.rhs = cfg.tolerance * std::max<double>(1.0, static_cast<double>(n));
        r.status = r.lhs <= r.rhs ? "pass" : "fail";
        r.ratio = ratio_of(r.lhs, r.rhs);
        rows.push_back(std::move(r));
    }

    return rows;
}

std::vector<ReportRow> run_point(const ExperimentConfig& cfg, const GridPoint& g,
                                 std::size_t pidx) {
    Field field = make_field(g.p, g.n);
    Space sp(std::move(field), g.d);
    const int q = sp.field().q();
    const int d = sp.d();

    ReportRow base;
    base.p = g.p;
    base.n = g.n;
    base.d = g.d;
    base.q = q;
    base.set = "-";

    std::vector<ReportRow> rows;

    if (has_check(cfg, "identities"))
        run_check(rows, base, "identities", cfg.timing,
                  [&] { return identities_rows(sp, cfg, base, pidx); });

    const bool holder_applicable = d % 2 == 0 && d >= 8;
    if (has_check(cfg, "holder") && holder_applicable)
        run_check(rows, base, "holder/exponent_identity", cfg.timing, [&] {
            const Rational theta = holder_theta(d);
            const Rational recombined = (Rational(1) - theta) / Rational(2) +
                                        Rational(3 * d + 4, 12 * d - 8) * theta;
            ReportRow r = base;
            r.check = "holder/exponent_identity";
            r.lhs = recombined.value();
            r.rhs = Rational(1, 3).value();
            r.status = recombined == Rational(1, 3) ? "pass" : "fail";
            r.ratio = 1.0;
            return std::vector<ReportRow>{r};
        });

    const std::vector<std::string> specs =
        cfg.set_specs.empty() ? standard_corpus(sp, cfg.seeds) : cfg.set_specs;

    for (const auto& spec : specs) {
        const PointSet E = sp.make_set(spec);
        ReportRow sbase = base;
        sbase.set = E.label;
        SetContext ctx{sp, E, {}};

        if (has_check(cfg, "lemma_audit"))
            for (int k : cfg.k_values)
                run_check(rows, sbase, "lemma_audit/k" + std::to_string(k), cfg.timing, [&, k] {
                    std::vector<ReportRow> out;
                    const NuProfile& prof = ctx.profile(k); // method Both: cross-check built in
                    ReportRow r = sbase;
                    r.check = "lemma_audit/cross_method_k" + std::to_string(k);
                    r.lhs = 0.0;
                    r.rhs = 0.0;
                    r.status = "pass";
                    out.push_back(std::move(r));
                    const AuditReport audit = lemma_audit(sp, E, k, cfg.tolerance, &prof);
                    for (const auto& rec : audit.records) {
                        ReportRow a = sbase;
                        a.check = "lemma_audit/" + rec.name;
                        a.hypothesis_met = rec.hypothesis_met;
                        a.lhs = rec.lhs;
                        a.rhs = rec.rhs;
                        a.status = !rec.hypothesis_met ? "skipped" : (rec.pass ? "pass" : "fail");
                        a.ratio = rec.slack_ratio;
                        out.push_back(std::move(a));
                    }
                    return out;
                });

        if (has_check(cfg, "r41"))
            for (int k : cfg.k_values)
                run_check(rows, sbase, "r41/k" + std::to_string(k), cfg.timing, [&, k] {
                    std::vector<ReportRow> out;
                    const DeltaReport rep = delta_report(sp, E, k, &ctx.profile(k));
                    ReportRow r = sbase;
                    r.check = "r41/exact_k" + std::to_string(k);
                    r.lhs = rep.lower_bound_r41;
                    r.rhs = static_cast<double>(rep.cardinality);
                    r.status = rep.r41_exact_ok ? "pass" : "fail";
                    r.ratio = ratio_of(r.lhs, r.rhs);
                    r.extras = {{"nu0", static_cast<double>(rep.nu0)}};
                    out.push_back(std::move(r));
                    ReportRow b = sbase;
                    b.check = "r41/lemma41_k" + std::to_string(k);
                    b.hypothesis_met = rep.lemma41_hypothesis_met;
                    b.lhs = rep.lemma41_bound;
                    b.rhs = static_cast<double>(rep.cardinality);
                    b.status = rep.lemma41_hypothesis_met ? "tracked" : "skipped";
                    b.ratio = rep.ratio_actual_over_bound;
                    out.push_back(std::move(b));
                    return out;
                });

        if (has_check(cfg, "moments"))
            for (int k : cfg.k_values)
                run_check(rows, sbase, "moments/k" + std::to_string(k), cfg.timing, [&, k] {
                    const MomentTable mt = sphere_moment(sp, E, k);
                    KahanSum<long double> col, direct;
                    for (double v : mt.per_t) col.add(v);
                    auto ehat = sp.set_hat(E);
                    for (const auto& z : *ehat)
                        direct.add(powl(std::abs(static_cast<std::complex<long double>>(z)),
                                        static_cast<long double>(k)));
                    ReportRow r = sbase;
                    r.check = "moments/column_sum_k" + std::to_string(k);
                    r.lhs = static_cast<double>(col.sum);
                    r.rhs = static_cast<double>(direct.sum);
                    const double budget =
                        cfg.tolerance * std::max<double>(1.0, static_cast<double>(sp.npoints()));
                    r.status = std::fabs(r.lhs - r.rhs) <= budget ? "pass" : "fail";
                    r.ratio = ratio_of(r.lhs, r.rhs);
                    r.extras = {{"max_nonzero_t", mt.max_nonzero_t},
                                {"argmax_t", static_cast<double>(mt.argmax_t)}};
                    return std::vector<ReportRow>{r};
                });

        if (has_check(cfg, "L3.2"))
            for (int k : cfg.k_values)
                run_check(rows, sbase, "L3.2/k" + std::to_string(k), cfg.timing, [&, k] {
                    const ConstantReport rep = restriction_ratio(sp, E, k, RestrictionLemma::L32);
                    ReportRow r = sbase;
                    r.check = "L3.2/k" + std::to_string(k);
                    r.lhs = rep.measured_lhs;
                    r.rhs = rep.bound_rhs_without_constant;
                    r.status = "tracked";
                    r.ratio = rep.implied_constant;
                    return std::vector<ReportRow>{r};
                });

        if (has_check(cfg, "L3.3"))
            run_check(rows, sbase, "L3.3/k3", cfg.timing, [&] {
                const ConstantReport rep = restriction_ratio(sp, E, 3, RestrictionLemma::L33);
                ReportRow r = sbase;
                r.check = "L3.3/k3";
                r.lhs = rep.measured_lhs;
                r.rhs = rep.bound_rhs_without_constant;
                r.status = "tracked";
                r.ratio = rep.implied_constant;
                r.extras = {{"log_slack", rep.log_slack}};
                return std::vector<ReportRow>{r};
            });

        if (has_check(cfg, "realaim"))
            run_check(rows, sbase, "realaim", cfg.timing, [&] {
                std::vector<ReportRow> out;
                for (const auto& rep : l2_sphere_energy_all(sp, E, cfg.tolerance)) {
                    ReportRow ident = sbase;
                    ident.check = "realaim/identity_t" + std::to_string(rep.t);
                    ident.lhs = rep.identity_abs_diff;
                    ident.rhs = rep.identity_budget;
                    ident.status = rep.identity_pass ? "pass" : "fail";
                    ident.ratio = ratio_of(ident.lhs, ident.rhs);
                    ident.extras = {{"energy_lhs", rep.identity_lhs},
                                    {"pair_expansion_rhs", rep.identity_rhs}};
                    out.push_back(std::move(ident));
                    ReportRow con = sbase;
                    con.check = "realaim/constant_t" + std::to_string(rep.t);
                    con.hypothesis_met = rep.energy.hypothesis_met;
                    con.lhs = rep.energy.measured_lhs;
                    con.rhs = rep.energy.bound_rhs_without_constant;
                    con.status = "tracked";
                    con.ratio = rep.energy.implied_constant;
                    con.extras = {{"surface_l2_lhs", rep.surface_l2.measured_lhs},
                                  {"surface_l2_rhs", rep.surface_l2.bound_rhs_without_constant},
                                  {"surface_l2_constant", rep.surface_l2.implied_constant}};
                    out.push_back(std::move(con));
                }
                return out;
            });

        if (has_check(cfg, "sign_sweep"))
            for (int k : cfg.k_values)
                run_check(rows, sbase, "sign_sweep/k" + std::to_string(k), cfg.timing, [&, k] {
                    const SignSweep sw = sign_sweep(sp, E, k);
                    ReportRow r = sbase;
                    r.check = "sign_sweep/k" + std::to_string(k);
                    r.lhs = static_cast<double>(sw.min_cardinality);
                    r.rhs = static_cast<double>(sw.max_cardinality);
                    r.status = "tracked";
                    r.ratio = ratio_of(r.lhs, r.rhs);
                    for (std::size_t i = 0; i < sw.cardinality.size(); ++i)
                        r.extras.emplace_back("cardinality_pattern" + std::to_string(i),
                                              static_cast<double>(sw.cardinality[i]));
                    return std::vector<ReportRow>{r};
                });

        if (has_check(cfg, "holder")) {
            if (!holder_applicable) {
                ReportRow r = sbase;
                r.check = "holder/chain";
                r.hypothesis_met = false;
                r.status = "skipped";
                r.seconds = 0.0;
                rows.push_back(std::move(r));
            } else {
                run_check(rows, sbase, "holder/chain", cfg.timing, [&] {
                    std::vector<ReportRow> out;
                    for (int t = 1; t < q; ++t) {
                        if (sp.spheres().sizes[t] == 0) continue;
                        const HolderReport rep = holder_chain(sp, E, t, cfg.tolerance);
                        ReportRow r = sbase;
                        r.check = "holder/chain_t" + std::to_string(t);
                        r.lhs = rep.norm_triple;
                        r.rhs = rep.report.bound_rhs_without_constant;
                        r.status = rep.pass ? "pass" : "fail";
                        r.ratio = rep.report.implied_constant;
                        r.extras = {{"norm_square", rep.norm_square},
                                    {"norm_upper", rep.norm_upper}};
                        out.push_back(std::move(r));
                    }
                    return out;
                });
            }
        }
    }

    if (has_check(cfg, "extension_constant")) {
        if (d % 2 != 0 || d < 4) {
            ReportRow r = base;
            r.check = "extension_constant";
            r.hypothesis_met = false;
            r.status = "skipped";
            rows.push_back(std::move(r));
        } else {
            run_check(rows, base, "extension_constant", cfg.timing, [&] {
                std::vector<ReportRow> out;
                for (int t = 1; t < q; ++t) {
                    if (sp.spheres().sizes[t] == 0) continue;
                    const ConstantReport rep = extension_constant(
                        sp, t, cfg.trials, mix64(cfg.master_seed, pidx * 131 + t));
                    ReportRow r = base;
                    r.check = "extension_constant/t" + std::to_string(t);
                    r.lhs = rep.measured_lhs;
                    r.rhs = rep.bound_rhs_without_constant;
                    r.status = "tracked";
                    r.ratio = rep.implied_constant;
                    out.push_back(std::move(r));
                }
                return out;
            });
        }
    }

    if (has_check(cfg, "sharpness") && g.n == 2)
        for (int k : cfg.k_values)
            run_check(rows, base, "sharpness/k" + std::to_string(k), cfg.timing,
                      [&, k] { return std::vector<ReportRow>{sharpness_row(g.p, g.d, k)}; });

    return rows;
}

} // namespace

std::vector<std::string> standard_corpus(const Space& sp,
                                         const std::vector<std::uint64_t>& seeds) {
    const i64 n = sp.npoints();
    std::vector<std::string> specs;
    auto add = [&specs](std::string s) {
        if (std::find(specs.begin(), specs.end(), s) == specs.end()) specs.push_back(std::move(s));
    };

    const double densities[4] = {0.05, 0.1, 0.25, 0.5};
    for (double density : densities)
        for (u64 s : seeds) {
            i64 size = std::max<i64>(1, llround(density * static_cast<double>(n)));
            size = std::min(size, n);
            add("random:size=" + std::to_string(size) + ",seed=" + std::to_string(s));
        }
    if (sp.field().n() >= 2) add("subfield");
    for (int t = 1; t <= 2; ++t) {
        const i64 st = sp.spheres().sizes[t];
        if (st == 0) continue;
        for (i64 j : {static_cast<i64>(1), std::max<i64>(1, st / 2), st})
            add("cap:t=" + std::to_string(t) + ",j=" + std::to_string(j));
    }
    add("affine:basis=1;shift=0");
    if (sp.d() >= 2) add("affine:basis=1," + std::to_string(sp.field().q()) + ";shift=2");
    add("singleton:1");
    add("full");
    add("explicit:0,1,2");
    return specs;
}

ReportRow sharpness_row(int p, int d, int k) {
    Field field = make_field(p, 2); // TooLarge if p^2 breaches the cap
    Space sp(std::move(field), d);
    const PointSet E = sp.make_set("subfield");

    i64 expected_size = 1;
    for (int i = 0; i < d; ++i) expected_size *= p;

    const DeltaReport rep = delta_report(sp, E, k);
    ReportRow r;
    r.p = p;
    r.n = 2;
    r.d = d;
    r.q = sp.field().q();
    r.set = "subfield";
    r.check = "sharpness/k" + std::to_string(k);
    r.lhs = static_cast<double>(rep.cardinality);
    r.rhs = static_cast<double>(p);
    const bool ok = rep.cardinality == p && E.size() == expected_size;
    r.status = ok ? "pass" : "fail";
    r.ratio = ratio_of(r.lhs, r.rhs);
    r.extras = {{"set_size", static_cast<double>(E.size())}};
    return r;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigInvalid("grid is required and nonempty");
    if (cfg.k_values.empty()) throw ConfigInvalid("k_values is required and nonempty");
    if (cfg.checks.empty()) throw ConfigInvalid("checks is required and nonempty");
    for (const auto& c : cfg.checks) {
        const auto& known = all_checks();
        if (std::find(known.begin(), known.end(), c) == known.end())
            throw ConfigInvalid("unknown check '" + c + "'");
    }
    if (cfg.set_specs.empty() && cfg.seeds.empty())
        throw ConfigInvalid("seeds is required when set_specs is empty");
    if (cfg.trials < 1) throw ConfigInvalid("trials must be >= 1");

    const std::size_t npoints = cfg.grid.size();
    std::vector<std::vector<ReportRow>> per_point(npoints);
    std::vector<std::exception_ptr> errors(npoints);

    unsigned workers = cfg.parallelism > 0 ? static_cast<unsigned>(cfg.parallelism)
                                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(npoints));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= npoints) return;
            try {
                per_point[idx] = run_point(cfg, cfg.grid[idx], idx);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    RunResult result;
    for (auto& rows : per_point)
        for (auto& r : rows) result.rows.push_back(std::move(r));
    for (const auto& r : result.rows)
        if (r.status == "fail") ++result.failures;
    result.exit_code = result.failures == 0 ? 0 : 1;
    return result;
}

} // namespace fqmag
