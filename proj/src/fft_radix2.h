#pragma once
#include <vector>
#include "vfy/complexutil.hpp"

namespace vfy {
namespace detail {

// in-place radix-2 FFT, size must be a power of two
inline void fft(std::vector<Cx>& a) {
    size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = -TWO_PI / (double)len;
        Cx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            Cx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                // resync the twiddle recurrence so roundoff stays O(64 eps)
                if ((k & 63) == 0)
                    w = Cx(std::cos(ang * (double)k), std::sin(ang * (double)k));
                Cx u = a[i + k], v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline size_t next_pow2(size_t n) {
    size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace detail
} // namespace vfy
