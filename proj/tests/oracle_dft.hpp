#pragma once

// Reference implementations used only by tests. Everything here is the
// slow-by-definition form: double sums for transforms, full k-tuple
// enumeration for counts, so the fast paths are checked against code that
// shares none of their structure.

#include <complex>
#include <cstdint>
#include <vector>

#include "fqmag/field.hpp"
#include "fqmag/lattice.hpp"
#include "fqmag/spectral.hpp"

namespace fqmag::oracle {

// O(q^{2d}) transform straight from the kernel definition.
inline std::vector<cd> naive_transform(const Field& f, const VectorIndexer& ix,
                                       const std::vector<cd>& in, TransformMode mode,
                                       int twist = 1) {
    const std::int64_t n = ix.npoints();
    std::vector<cd> out(static_cast<std::size_t>(n));
    for (std::int64_t m = 0; m < n; ++m) {
        cd acc(0.0, 0.0);
        for (std::int64_t x = 0; x < n; ++x) {
            int dot = bilinear(f, ix, m, x).dot;
            if (mode != TransformMode::Inverse) dot = f.neg(dot);
            acc += in[static_cast<std::size_t>(x)] * additive_character(f, dot, twist);
        }
        if (mode == TransformMode::Hat) acc /= static_cast<double>(n);
        out[static_cast<std::size_t>(m)] = acc;
    }
    return out;
}

// nu_k(t) by walking E^k with an odometer; integer arithmetic only.
inline std::vector<std::int64_t> nu_exhaustive(const Field& f, const VectorIndexer& ix,
                                               const std::vector<std::int64_t>& points, int k) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(f.q()), 0);
    if (points.empty()) return counts;
    const int d = ix.d();
    std::vector<std::size_t> odo(static_cast<std::size_t>(k), 0);
    std::vector<int> sum(static_cast<std::size_t>(d));
    for (;;) {
        std::fill(sum.begin(), sum.end(), 0);
        for (int j = 0; j < k; ++j)
            for (int a = 0; a < d; ++a)
                sum[static_cast<std::size_t>(a)] =
                    f.add(sum[static_cast<std::size_t>(a)],
                          ix.coord(points[odo[static_cast<std::size_t>(j)]], a));
        int nrm = 0;
        for (int a = 0; a < d; ++a)
            nrm = f.add(nrm, f.mul(sum[static_cast<std::size_t>(a)], sum[static_cast<std::size_t>(a)]));
        ++counts[static_cast<std::size_t>(nrm)];
        int j = 0;
        while (j < k && ++odo[static_cast<std::size_t>(j)] == points.size()) {
            odo[static_cast<std::size_t>(j)] = 0;
            ++j;
        }
        if (j == k) break;
    }
    return counts;
}

} // namespace fqmag::oracle
