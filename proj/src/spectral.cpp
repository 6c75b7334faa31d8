#include "fqmag/spectral.hpp"

#include <algorithm>

namespace fqmag {

FourierPlan::FourierPlan(const Field& f, int d, int twist)
    : field_(&f), d_(d), twist_(twist) {
    if (d < 1) throw BadDimension("d must be >= 1");
    if (twist == 0) throw TrivialTwist("transform kernel needs a nontrivial character");
    if (twist < 0 || twist >= f.q()) throw BadSpec("twist outside [0, q)");

    npoints_ = 1;
    for (int i = 0; i < d; ++i) npoints_ *= f.q();

    const int p = f.p(), n = f.n(), q = f.q();
    std::vector<int> basis(n);
    basis[0] = 1;
    for (int k = 1; k < n; ++k) basis[k] = basis[k - 1] * p;

    dual_elem_.resize(q);
    for (int e = 0; e < q; ++e) {
        const int te = f.mul(twist, e);
        int acc = 0, pk = 1;
        for (int k = 0; k < n; ++k) {
            acc += f.trace(f.mul(te, basis[k])) * pk;
            pk *= p;
        }
        dual_elem_[e] = acc;
    }
    std::vector<char> seen(q, 0);
    for (int e : dual_elem_) {
        if (e < 0 || e >= q || seen[e])
            throw BadSpec("trace pairing failed to produce a dual bijection");
        seen[e] = 1;
    }
}

SpectralTable FourierPlan::fourier(const std::vector<cd>& f, TransformMode mode) const {
    SpectralTable out;
    out.values = apply<double>(f, mode);
    switch (mode) {
    case TransformMode::Hat: out.kind = TableKind::Hat; break;
    case TransformMode::Tilde: out.kind = TableKind::Tilde; break;
    case TransformMode::Inverse: out.kind = TableKind::Raw; break;
    }
    return out;
}

NormSpec NormSpec::conjugate() const {
    NormSpec out = *this;
    const double inf = std::numeric_limits<double>::infinity();
    if (s == 1.0) out.s = inf;
    else if (std::isinf(s)) out.s = 1.0;
    else out.s = s / (s - 1.0);
    return out;
}

double norm_eval(const std::vector<cd>& f, const NormSpec& spec, const SphereTable* spheres) {
    if (!(spec.s >= 1.0)) throw BadSpec("norm exponent must lie in [1, inf]");
    const bool is_inf = std::isinf(spec.s);

    if (spec.measure == Measure::Dsigma) {
        if (spheres == nullptr || spec.t < 0 ||
            spec.t >= static_cast<int>(spheres->members.size()))
            throw MissingSphere("surface-measure norm needs a built sphere radius");
        const auto& mem = spheres->members[static_cast<std::size_t>(spec.t)];
        if (mem.empty()) throw MissingSphere("sphere has no points at this radius");
        if (is_inf) {
            double mx = 0.0;
            for (std::int64_t x : mem) mx = std::max(mx, std::abs(f[static_cast<std::size_t>(x)]));
            return mx;
        }
        long double acc = 0.0L;
        for (std::int64_t x : mem)
            acc += std::pow(std::abs(f[static_cast<std::size_t>(x)]), spec.s);
        acc /= static_cast<long double>(mem.size());
        return std::pow(static_cast<double>(acc), 1.0 / spec.s);
    }

    if (is_inf) {
        double mx = 0.0;
        for (const cd& z : f) mx = std::max(mx, std::abs(z));
        return mx;
    }
    long double acc = 0.0L;
    for (const cd& z : f) acc += std::pow(std::abs(z), spec.s);
    if (spec.measure == Measure::Dx) acc /= static_cast<long double>(f.size());
    return std::pow(static_cast<double>(acc), 1.0 / spec.s);
}

} // namespace fqmag
