#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fqmag/field.hpp"
#include "fqmag/lattice.hpp"
#include "fqmag/spectral.hpp"

namespace fqmag {

// Bundles F_q, the indexed lattice F_q^d, its spheres, and the transform plan
// for one character twist. Sphere spectra and set spectra are memoized behind
// a lock so audits can share one Space across workers.
class Space {
public:
    Space(Field field, int d, int twist = 1, std::int64_t max_points = 0);
    Space(const Space&) = delete;
    Space& operator=(const Space&) = delete;

    const Field& field() const { return field_; }
    const VectorIndexer& indexer() const { return ix_; }
    const SphereTable& spheres() const { return spheres_; }
    const FourierPlan& plan() const { return plan_; }
    int d() const { return ix_.d(); }
    std::int64_t npoints() const { return ix_.npoints(); }

    // Normalized spectrum of the S_t indicator. Real-valued because
    // S_t = -S_t pairs each kernel value with its conjugate.
    const std::vector<long double>& sphere_hat(int t) const;

    // Normalized spectrum of the E indicator, memoized by generator label.
    std::shared_ptr<const std::vector<cd>> set_hat(const PointSet& E) const;

    PointSet make_set(const std::string& spec) const;

private:
    Field field_;
    VectorIndexer ix_;
    SphereTable spheres_;
    FourierPlan plan_;
    mutable std::mutex mu_;
    mutable std::vector<std::unique_ptr<std::vector<long double>>> shat_;
    mutable std::unordered_map<std::string, std::shared_ptr<const std::vector<cd>>> ehat_;
};

// Closed form for the sphere spectrum in even dimension:
// q^{-1} delta_0(m) + q^{-d-1} G^d sum_{l != 0} chi(t*l + ||m||/(4l)).
cd sphere_hat_closed(const Space& sp, int t, std::int64_t m_index);

// lhs = sum_t shat_t(m) conj(shat_t(v)) from transforms; rhs is the closed
// form q^{-1} d0(m) d0(v) + q^{-d-1} (q [||m||=||v||] - 1).
std::pair<cd, cd> dual_sum_identity(const Space& sp, std::int64_t m_index, std::int64_t v_index);

// (f dsigma)^vee(m) = (1/|S_t|) sum_{x in S_t} f(x) chi(m.x); f is given in
// the order of spheres().members[t].
SpectralTable extension_fn(const Space& sp, const std::vector<cd>& f_on_sphere, int t);

} // namespace fqmag
