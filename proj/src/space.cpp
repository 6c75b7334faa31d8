#include "fqmag/space.hpp"

#include <cmath>

namespace fqmag {

Space::Space(Field field, int d, int twist, std::int64_t max_points)
    : field_(std::move(field)),
      ix_(field_.q(), d),
      spheres_(build_spheres(field_, ix_, max_points)),
      plan_(field_, d, twist),
      shat_(static_cast<std::size_t>(field_.q())) {}

const std::vector<long double>& Space::sphere_hat(int t) const {
    if (t < 0 || t >= field_.q()) throw BadSpec("radius outside [0, q)");
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = shat_[static_cast<std::size_t>(t)];
    if (!slot) {
        std::vector<std::complex<long double>> g(static_cast<std::size_t>(npoints()));
        for (std::int64_t x : spheres_.members[static_cast<std::size_t>(t)])
            g[static_cast<std::size_t>(x)] = 1.0L;
        auto hat = plan_.apply<long double>(std::move(g), TransformMode::Hat);
        auto vals = std::make_unique<std::vector<long double>>(hat.size());
        for (std::size_t i = 0; i < hat.size(); ++i) {
            if (std::fabs(static_cast<double>(hat[i].imag())) > 1e-12)
                throw RoundingOverflow("sphere spectrum drifted off the real axis");
            (*vals)[i] = hat[i].real();
        }
        slot = std::move(vals);
    }
    return *slot;
}

std::shared_ptr<const std::vector<cd>> Space::set_hat(const PointSet& E) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = ehat_.find(E.label);
        if (it != ehat_.end()) return it->second;
    }
    std::vector<cd> g(static_cast<std::size_t>(npoints()));
    for (std::int64_t x : E.points) g[static_cast<std::size_t>(x)] = 1.0;
    auto hat = std::make_shared<const std::vector<cd>>(
        plan_.apply<double>(std::move(g), TransformMode::Hat));
    std::lock_guard<std::mutex> lock(mu_);
    return ehat_.emplace(E.label, std::move(hat)).first->second;
}

PointSet Space::make_set(const std::string& spec) const {
    return build_set(field_, ix_, spheres_, spec);
}

cd sphere_hat_closed(const Space& sp, int t, std::int64_t m_index) {
    const Field& f = sp.field();
    if (f.p() == 2) throw CharTwo("closed form needs 4 invertible");
    if (sp.d() % 2 != 0)
        throw OddDimension("closed form is stated for even d; use the direct transform");
    if (t < 0 || t >= f.q()) throw BadSpec("radius outside [0, q)");

    const int q = f.q();
    const int twist = sp.plan().twist();
    const int norm_m = sp.spheres().norm_of[static_cast<std::size_t>(m_index)];
    const int four = 4 % f.p(); // 1+1+1+1 lands in the prime subfield
    const int w = f.mul(norm_m, f.inv(four));

    cd lsum = 0.0;
    for (int l = 1; l < q; ++l) {
        const int arg = f.add(f.mul(t, l), f.mul(w, f.inv(l)));
        lsum += f.chi(f.mul(twist, arg));
    }
    const double qd = static_cast<double>(sp.npoints());
    cd out = f.gauss_pow_even(sp.d()) / (qd * q) * lsum;
    if (m_index == 0) out += 1.0 / q;
    return out;
}

std::pair<cd, cd> dual_sum_identity(const Space& sp, std::int64_t m_index, std::int64_t v_index) {
    const int q = sp.field().q();
    long double lhs = 0.0L;
    for (int t = 0; t < q; ++t) {
        const auto& sh = sp.sphere_hat(t);
        lhs += sh[static_cast<std::size_t>(m_index)] * sh[static_cast<std::size_t>(v_index)];
    }

    const auto& norm_of = sp.spheres().norm_of;
    const bool same_norm =
        norm_of[static_cast<std::size_t>(m_index)] == norm_of[static_cast<std::size_t>(v_index)];
    const double qd1 = static_cast<double>(sp.npoints()) * q;
    double rhs = (same_norm ? q - 1.0 : -1.0) / qd1;
    if (m_index == 0 && v_index == 0) rhs += 1.0 / q;
    return {cd(static_cast<double>(lhs), 0.0), cd(rhs, 0.0)};
}

SpectralTable extension_fn(const Space& sp, const std::vector<cd>& f_on_sphere, int t) {
    if (t < 0 || t >= sp.field().q()) throw BadSpec("radius outside [0, q)");
    const auto& mem = sp.spheres().members[static_cast<std::size_t>(t)];
    if (mem.empty()) throw EmptySphere("no points at this radius");
    if (f_on_sphere.size() != mem.size())
        throw SizeMismatch("sphere function has " + std::to_string(f_on_sphere.size()) +
                           " values, expected " + std::to_string(mem.size()));

    std::vector<cd> g(static_cast<std::size_t>(sp.npoints()));
    for (std::size_t i = 0; i < mem.size(); ++i)
        g[static_cast<std::size_t>(mem[i])] = f_on_sphere[i];
    auto vals = sp.plan().apply<double>(std::move(g), TransformMode::Inverse);
    const double scale = 1.0 / static_cast<double>(mem.size());
    for (cd& z : vals) z *= scale;
    return {std::move(vals), TableKind::Raw};
}

} // namespace fqmag
