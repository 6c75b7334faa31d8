#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqmag/field.hpp"

namespace fqmag {

// Default cap on q^d; overridable via the FQMAG_MAX_POINTS environment variable.
inline constexpr std::int64_t kDefaultMaxPoints = 10'000'000;

// Mixed-radix index over F_q^d: index(x) = sum_i x_i * q^i, coordinate 0
// least significant. Since field indices are themselves base-p digit strings,
// an index in [0, q^d) is also the base-p digit string of the (Z_p)^{nd}
// coordinate vector, which the transform kernels rely on.
class VectorIndexer {
public:
    VectorIndexer(int q, int d);

    int q() const { return q_; }
    int d() const { return d_; }
    std::int64_t npoints() const { return npoints_; }

    std::int64_t encode(const std::vector<int>& coords) const;
    std::vector<int> decode(std::int64_t index) const;
    int coord(std::int64_t index, int axis) const;

private:
    int q_;
    int d_;
    std::int64_t npoints_;
    std::vector<std::int64_t> stride_;
};

// ||x|| = sum x_i^2 and the associated spheres S_t = {x : ||x|| = t}.
struct SphereTable {
    std::vector<int> norm_of;                    // q^d entries
    std::vector<std::vector<std::int64_t>> members; // per t in [0, q), ascending
    std::vector<std::int64_t> sizes;             // |S_t|
};

// x . y = sum x_i y_i in F_q, plus ||x|| = x . x.
struct BilinearResult {
    int dot;
    int norm_v;
};

BilinearResult bilinear(const Field& f, const VectorIndexer& ix,
                        std::int64_t x_index, std::int64_t y_index);

SphereTable build_spheres(const Field& f, const VectorIndexer& ix,
                          std::int64_t max_points = 0); // 0: env or default cap

// A subset of F_q^d: dense membership bits for branch-light transform loops
// plus the sorted member list for per-point iteration, and the generator
// label that reproduces it.
struct PointSet {
    std::vector<std::uint8_t> bits;
    std::vector<std::int64_t> points;
    std::string label;

    std::int64_t size() const { return static_cast<std::int64_t>(points.size()); }
    bool contains(std::int64_t index) const { return bits[static_cast<std::size_t>(index)] != 0; }
};

// Grammar: "explicit:i1,i2,...", "random:size=N,seed=S", "density:D,seed=S",
// "subfield", "cap:t=T,j=J", "affine:basis=i1,i2;shift=i0", "full",
// "singleton:IDX". Throws BadSpec on malformed input or unsatisfiable sizes.
PointSet build_set(const Field& f, const VectorIndexer& ix,
                   const SphereTable& spheres, const std::string& spec);

} // namespace fqmag
