#include "fqmag/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <unordered_set>

namespace fqmag {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) { out.push_back(s.substr(start)); break; }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw BadSpec("cannot parse " + what + " from '" + s + "'");
    }
}

double parse_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw BadSpec("cannot parse " + what + " from '" + s + "'");
    }
}

// key=value pairs out of "k1=v1,k2=v2".
std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& s) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& part : split(s, ',')) {
        std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw BadSpec("expected key=value, got '" + part + "'");
        out.emplace_back(part.substr(0, eq), part.substr(eq + 1));
    }
    return out;
}

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % n;
    }
}

std::vector<std::int64_t> sample_without_replacement(std::int64_t n, std::int64_t size,
                                                     std::uint64_t seed) {
    if (size < 0 || size > n) throw BadSpec("sample size out of range");
    std::mt19937_64 rng(seed);
    std::unordered_set<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(size) * 2);
    while (static_cast<std::int64_t>(chosen.size()) < size)
        chosen.insert(static_cast<std::int64_t>(bounded_draw(rng, static_cast<std::uint64_t>(n))));
    std::vector<std::int64_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t resolve_max_points(std::int64_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FQMAG_MAX_POINTS")) {
        try {
            std::size_t used = 0;
            std::int64_t v = std::stoll(env, &used);
            if (used != std::string(env).size() || v <= 0) throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw ConfigInvalid("FQMAG_MAX_POINTS must be a positive integer");
        }
    }
    return kDefaultMaxPoints;
}

} // namespace

VectorIndexer::VectorIndexer(int q, int d) : q_(q), d_(d) {
    if (d < 1) throw BadDimension("d must be >= 1");
    npoints_ = 1;
    stride_.resize(d);
    for (int i = 0; i < d; ++i) {
        stride_[i] = npoints_;
        npoints_ *= q;
    }
}

std::int64_t VectorIndexer::encode(const std::vector<int>& coords) const {
    if (static_cast<int>(coords.size()) != d_) throw DimensionMismatch("coordinate count != d");
    std::int64_t idx = 0;
    for (int i = 0; i < d_; ++i) {
        if (coords[i] < 0 || coords[i] >= q_) throw BadSpec("coordinate out of [0, q)");
        idx += coords[i] * stride_[i];
    }
    return idx;
}

std::vector<int> VectorIndexer::decode(std::int64_t index) const {
    std::vector<int> coords(d_);
    for (int i = 0; i < d_; ++i) {
        coords[i] = static_cast<int>(index % q_);
        index /= q_;
    }
    return coords;
}

int VectorIndexer::coord(std::int64_t index, int axis) const {
    return static_cast<int>(index / stride_[axis] % q_);
}

BilinearResult bilinear(const Field& f, const VectorIndexer& ix,
                        std::int64_t x_index, std::int64_t y_index) {
    int dot = 0, norm = 0;
    for (int i = 0; i < ix.d(); ++i) {
        int xi = ix.coord(x_index, i);
        dot = f.add(dot, f.mul(xi, ix.coord(y_index, i)));
        norm = f.add(norm, f.mul(xi, xi));
    }
    return {dot, norm};
}

SphereTable build_spheres(const Field& f, const VectorIndexer& ix, std::int64_t max_points) {
    std::int64_t cap = resolve_max_points(max_points);
    if (ix.npoints() > cap)
        throw TooLarge("q^d = " + std::to_string(ix.npoints()) + " exceeds point cap " +
                       std::to_string(cap));

    const int q = f.q();
    SphereTable st;
    st.norm_of.resize(static_cast<std::size_t>(ix.npoints()));
    // Prefix norms in place: after pass j the range [0, q^{j+1}) holds the
    // norm of the first j+1 coordinates.
    for (int c = 0; c < q; ++c) st.norm_of[c] = f.mul(c, c);
    std::int64_t filled = q;
    for (int j = 1; j < ix.d(); ++j) {
        for (int c = 1; c < q; ++c) {
            int sq = f.mul(c, c);
            std::int64_t base = c * filled;
            for (std::int64_t idx = 0; idx < filled; ++idx)
                st.norm_of[static_cast<std::size_t>(base + idx)] = f.add(st.norm_of[static_cast<std::size_t>(idx)], sq);
        }
        filled *= q;
    }

    st.members.resize(q);
    st.sizes.assign(q, 0);
    for (std::int64_t idx = 0; idx < ix.npoints(); ++idx)
        st.members[st.norm_of[static_cast<std::size_t>(idx)]].push_back(idx);
    for (int t = 0; t < q; ++t) st.sizes[t] = static_cast<std::int64_t>(st.members[t].size());
    return st;
}

PointSet build_set(const Field& f, const VectorIndexer& ix,
                   const SphereTable& spheres, const std::string& spec) {
    PointSet set;
    set.label = spec;
    const std::int64_t npoints = ix.npoints();

    std::size_t colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (kind == "explicit") {
        for (const auto& tok : split(rest, ',')) {
            std::int64_t v = parse_int(tok, "point index");
            if (v < 0 || v >= npoints) throw BadSpec("point index out of range: " + tok);
            set.points.push_back(v);
        }
        std::sort(set.points.begin(), set.points.end());
        set.points.erase(std::unique(set.points.begin(), set.points.end()), set.points.end());
    } else if (kind == "random") {
        std::int64_t size = -1, seed = -1;
        for (const auto& [k, v] : parse_kv(rest)) {
            if (k == "size") size = parse_int(v, "size");
            else if (k == "seed") seed = parse_int(v, "seed");
            else throw BadSpec("unknown random parameter '" + k + "'");
        }
        if (size < 0 || seed < 0) throw BadSpec("random needs size= and seed=");
        if (size > npoints) throw BadSpec("random size exceeds q^d");
        set.points = size == npoints
                         ? [&] { std::vector<std::int64_t> all(npoints); for (std::int64_t i = 0; i < npoints; ++i) all[i] = i; return all; }()
                         : sample_without_replacement(npoints, size, static_cast<std::uint64_t>(seed));
    } else if (kind == "density") {
        auto parts = split(rest, ',');
        if (parts.empty()) throw BadSpec("density needs a value");
        double dens = parse_real(parts[0], "density");
        if (dens < 0.0 || dens > 1.0) throw BadSpec("density must lie in [0, 1]");
        std::int64_t seed = -1;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            auto kv = parse_kv(parts[i]);
            for (const auto& [k, v] : kv) {
                if (k == "seed") seed = parse_int(v, "seed");
                else throw BadSpec("unknown density parameter '" + k + "'");
            }
        }
        if (seed < 0) throw BadSpec("density needs seed=");
        std::int64_t size = std::llround(dens * static_cast<double>(npoints));
        if (size > npoints) size = npoints;
        set.points = size == npoints
                         ? [&] { std::vector<std::int64_t> all(npoints); for (std::int64_t i = 0; i < npoints; ++i) all[i] = i; return all; }()
                         : sample_without_replacement(npoints, size, static_cast<std::uint64_t>(seed));
    } else if (kind == "subfield") {
        const int p = f.p();
        std::int64_t count = 1;
        for (int i = 0; i < ix.d(); ++i) count *= p;
        std::vector<int> coords(ix.d(), 0);
        for (std::int64_t v = 0; v < count; ++v) {
            std::int64_t t = v;
            for (int i = 0; i < ix.d(); ++i) { coords[i] = static_cast<int>(t % p); t /= p; }
            set.points.push_back(ix.encode(coords));
        }
        std::sort(set.points.begin(), set.points.end());
    } else if (kind == "cap") {
        std::int64_t t = -1, j = -1;
        for (const auto& [k, v] : parse_kv(rest)) {
            if (k == "t") t = parse_int(v, "radius");
            else if (k == "j") j = parse_int(v, "cap size");
            else throw BadSpec("unknown cap parameter '" + k + "'");
        }
        if (t < 0 || t >= f.q()) throw BadSpec("cap radius out of [0, q)");
        if (j < 0 || j > spheres.sizes[static_cast<std::size_t>(t)])
            throw BadSpec("cap size exceeds |S_t|");
        const auto& mem = spheres.members[static_cast<std::size_t>(t)];
        set.points.assign(mem.begin(), mem.begin() + j);
    } else if (kind == "affine") {
        std::vector<std::int64_t> basis;
        std::int64_t shift = 0;
        // Sections are ';'-separated because basis values themselves use ','.
        for (const auto& section : split(rest, ';')) {
            const std::size_t eq = section.find('=');
            if (eq == std::string::npos)
                throw BadSpec("expected key=value, got '" + section + "'");
            const std::string k = section.substr(0, eq);
            const std::string v = section.substr(eq + 1);
            if (k == "basis") {
                for (const auto& tok : split(v, ','))
                    basis.push_back(parse_int(tok, "basis index"));
            } else if (k == "shift") {
                shift = parse_int(v, "shift index");
            } else {
                throw BadSpec("unknown affine parameter '" + k + "'");
            }
        }
        if (basis.empty()) throw BadSpec("affine needs basis=");
        for (std::int64_t b : basis)
            if (b < 0 || b >= npoints) throw BadSpec("basis index out of range");
        if (shift < 0 || shift >= npoints) throw BadSpec("shift index out of range");

        std::int64_t expected = 1;
        for (std::size_t i = 0; i < basis.size(); ++i) expected *= f.q();
        std::unordered_set<std::int64_t> span;
        span.reserve(static_cast<std::size_t>(expected) * 2);
        std::vector<int> scalars(basis.size(), 0);
        for (std::int64_t v = 0; v < expected; ++v) {
            std::int64_t t = v;
            for (std::size_t i = 0; i < basis.size(); ++i) {
                scalars[i] = static_cast<int>(t % f.q());
                t /= f.q();
            }
            std::vector<int> coords = ix.decode(shift);
            for (std::size_t i = 0; i < basis.size(); ++i)
                for (int axis = 0; axis < ix.d(); ++axis)
                    coords[axis] = f.add(coords[axis], f.mul(scalars[i], ix.coord(basis[i], axis)));
            span.insert(ix.encode(coords));
        }
        if (static_cast<std::int64_t>(span.size()) != expected)
            throw DegenerateSet("affine basis is linearly dependent");
        set.points.assign(span.begin(), span.end());
        std::sort(set.points.begin(), set.points.end());
    } else if (kind == "full") {
        set.points.resize(static_cast<std::size_t>(npoints));
        for (std::int64_t i = 0; i < npoints; ++i) set.points[static_cast<std::size_t>(i)] = i;
    } else if (kind == "singleton") {
        std::int64_t v = parse_int(rest, "point index");
        if (v < 0 || v >= npoints) throw BadSpec("point index out of range");
        set.points.push_back(v);
    } else {
        throw BadSpec("unknown set kind '" + kind + "'");
    }

    set.bits.assign(static_cast<std::size_t>(npoints), 0);
    for (std::int64_t idx : set.points) set.bits[static_cast<std::size_t>(idx)] = 1;
    return set;
}

} // namespace fqmag
