#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace parlp::detail {

using cplx = std::complex<double>;

// Unit-root table for length n (power of two): w[k] = exp(-2 pi i k / n),
// k < n/2. Shared across calls; computed once per length.
inline std::shared_ptr<const std::vector<cplx>> twiddles(std::size_t n) {
    static std::mutex mtx;
    static std::map<std::size_t, std::shared_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<std::vector<cplx>>(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        (*table)[k] = cplx(std::cos(a), std::sin(a));
    }
    cache.emplace(n, table);
    return table;
}

// In-place iterative radix-2 Cooley-Tukey. inverse applies conjugated roots
// and no 1/n factor; callers own the normalization.
inline void fft_pow2(cplx* a, std::size_t n, bool inverse) {
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto tw = twiddles(n);
    const auto& w = *tw;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t k = 0; k < half; ++k) {
                cplx root = w[k * step];
                if (inverse) root = std::conj(root);
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * root;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
    }
}

inline bool is_pow2(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

} // namespace parlp::detail
