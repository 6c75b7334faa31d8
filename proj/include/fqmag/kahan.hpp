#pragma once

#include <complex>

namespace fqmag {

// Compensated accumulator; keeps the running error term so long chains of
// cancelling terms do not erode the sum.
template <typename T>
struct KahanSum {
    T sum{};
    T comp{};

    void add(T v) {
        T y = v - comp;
        T t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

template <typename T>
struct KahanComplex {
    KahanSum<T> re, im;

    void add(std::complex<T> v) {
        re.add(v.real());
        im.add(v.imag());
    }
    std::complex<T> value() const { return {re.sum, im.sum}; }
};

} // namespace fqmag
