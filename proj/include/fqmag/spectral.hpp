#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "fqmag/errors.hpp"
#include "fqmag/field.hpp"
#include "fqmag/lattice.hpp"

namespace fqmag {

enum class TransformMode {
    Hat,     // q^{-d} sum_x f(x) chi(-m.x)
    Tilde,   // sum_x f(x) chi(-m.x)
    Inverse, // sum_m f(m) chi(+m.x)
};

enum class TableKind { Hat, Tilde, Raw };

struct SpectralTable {
    std::vector<cd> values;
    TableKind kind = TableKind::Raw;
};

// DFT over F_q^d factored through the additive group (Z_p)^{nd}: nd passes of
// p-point transforms, then a gather through the trace-dual permutation that
// maps field-coordinate kernels chi(twist*a*b) onto plain digit kernels.
// Cost O(q^d * n*d*p) versus O(q^{2d}) for the double sum.
class FourierPlan {
public:
    FourierPlan(const Field& f, int d, int twist = 1);

    const Field& field() const { return *field_; }
    int d() const { return d_; }
    int twist() const { return twist_; }
    std::int64_t npoints() const { return npoints_; }

    template <typename T>
    std::vector<std::complex<T>> apply(std::vector<std::complex<T>> in, TransformMode mode) const;

    SpectralTable fourier(const std::vector<cd>& f, TransformMode mode) const;

private:
    const Field* field_;
    int d_;
    int twist_;
    std::int64_t npoints_;
    // e -> sum_k Tr(twist*e*b_k) p^k over the power basis b_k; a bijection on
    // [0, q) because the trace pairing is nondegenerate for twist != 0.
    std::vector<int> dual_elem_;
};

enum class Measure {
    Dm,     // counting measure on the dual copy of F_q^d
    Dx,     // normalized counting measure, weight q^{-d}
    Dsigma, // normalized surface measure on S_t, weight 1/|S_t|
};

struct NormSpec {
    double s = 2.0; // exponent in [1, inf]
    Measure measure = Measure::Dm;
    int t = -1; // radius, required for Dsigma

    NormSpec conjugate() const; // s -> s/(s-1) with 1 <-> inf
};

// The sum-form norm over the measured domain; s = inf gives the max modulus.
double norm_eval(const std::vector<cd>& f, const NormSpec& spec,
                 const SphereTable* spheres = nullptr);

template <typename T>
std::vector<std::complex<T>> FourierPlan::apply(std::vector<std::complex<T>> in,
                                                TransformMode mode) const {
    if (static_cast<std::int64_t>(in.size()) != npoints_)
        throw SizeMismatch("table has " + std::to_string(in.size()) + " entries, expected " +
                           std::to_string(npoints_));
    const int p = field_->p();
    const int q = field_->q();
    const int nd = field_->n() * d_;
    const T sign = mode == TransformMode::Inverse ? T(1) : T(-1);

    std::vector<std::complex<T>> roots(p);
    for (int r = 0; r < p; ++r)
        roots[r] = std::polar(T(1), sign * T(2) * std::numbers::pi_v<T> * T(r) / T(p));

    std::vector<std::complex<T>> buf(p);
    std::int64_t stride = 1;
    for (int axis = 0; axis < nd; ++axis) {
        const std::int64_t block = stride * p;
        for (std::int64_t base0 = 0; base0 < npoints_; base0 += block) {
            for (std::int64_t off = 0; off < stride; ++off) {
                const std::int64_t base = base0 + off;
                for (int i = 0; i < p; ++i) buf[i] = in[base + i * stride];
                for (int j = 0; j < p; ++j) {
                    std::complex<T> acc = buf[0];
                    for (int i = 1; i < p; ++i) acc += roots[i * j % p] * buf[i];
                    in[base + j * stride] = acc;
                }
            }
        }
        stride = block;
    }

    std::vector<std::complex<T>> out(in.size());
    std::vector<int> digits(d_, 0);
    std::vector<std::int64_t> qpow(d_);
    qpow[0] = 1;
    for (int i = 1; i < d_; ++i) qpow[i] = qpow[i - 1] * q;
    std::int64_t dual = 0;
    for (std::int64_t idx = 0;; ++idx) {
        out[idx] = in[dual];
        if (idx + 1 == npoints_) break;
        for (int i = 0; i < d_; ++i) {
            const int cur = digits[i];
            if (cur + 1 < q) {
                digits[i] = cur + 1;
                dual += (dual_elem_[cur + 1] - dual_elem_[cur]) * qpow[i];
                break;
            }
            digits[i] = 0;
            dual -= dual_elem_[cur] * qpow[i];
        }
    }

    if (mode == TransformMode::Hat) {
        const T scale = T(1) / static_cast<T>(npoints_);
        for (auto& z : out) z *= scale;
    }
    return out;
}

} // namespace fqmag
