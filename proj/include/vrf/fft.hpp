#pragma once

#include <vector>

#include "vrf/types.hpp"

namespace vrf {

/// In-place radix-2 transform, sign = +1 evaluates sum_n x_n e^{+2 pi i k n / N}.
inline void fft_radix2(std::vector<Complex>& x, int sign) {
    const size_t n = x.size();
    if (n < 2) return;
    if ((n & (n - 1)) != 0) throw NumericsError("fft length must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * pi / static_cast<double>(len);
        const Complex wl{std::cos(ang), std::sin(ang)};
        for (size_t i = 0; i < n; i += len) {
            Complex w{1.0, 0.0};
            for (size_t k = 0; k < len / 2; ++k) {
                const Complex u = x[i + k];
                const Complex v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
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

} // namespace vrf
