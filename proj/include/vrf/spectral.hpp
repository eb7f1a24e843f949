#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <span>
#include <thread>
#include <vector>

#include "vrf/exponent.hpp"
#include "vrf/fft.hpp"
#include "vrf/third_order.hpp"
#include "vrf/types.hpp"

namespace vrf {

namespace detail {

// Exact factorials as doubles; n! is below 2^63 for n <= 20, so the conversion
// is faithful in the range the coefficient sums use.
inline double factorial(int n) {
    static const auto table = [] {
        std::array<double, 171> t{};
        t[0] = 1.0;
        std::uint64_t exact = 1;
        for (int i = 1; i <= 20; ++i) {
            exact *= static_cast<std::uint64_t>(i);
            t[static_cast<size_t>(i)] = static_cast<double>(exact);
        }
        for (int i = 21; i <= 170; ++i)
            t[static_cast<size_t>(i)] = t[static_cast<size_t>(i - 1)] * i;
        return t;
    }();
    return table[static_cast<size_t>(n)];
}

// The six windows of a third-order exponent in canonical order, as the
// coefficients c of c * e^{s i Lambda} (note the ExponentTerm convention is
// coeff * (1 - e^{s i Lambda}), hence the sign flip).
struct ThirdOrderWindows {
    std::array<double, 6> c;
    std::array<int, 6> s;
};

inline ThirdOrderWindows windows_of(const ExponentForm& form) {
    if (form.order != 3 || form.omegas.size() != 1 || form.terms.size() != 6)
        throw PathwayError("spectral decomposition requires a single-mode third-order exponent");
    static const std::array<std::array<int, 3>, 6> canon = {{
        {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 1, 1},
    }};
    ThirdOrderWindows w{};
    for (const auto& term : form.terms) {
        std::array<int, 3> p{0, 0, 0};
        for (int i = term.first; i <= term.last; ++i) p[static_cast<size_t>(i - 1)] = 1;
        for (size_t idx = 0; idx < 6; ++idx) {
            if (p == canon[idx]) {
                w.c[idx] = -term.coeff;
                w.s[idx] = term.sign;
                break;
            }
        }
    }
    return w;
}

} // namespace detail

/// Non-oscillating offset h(z): R = e^{-h} prod_w exp(c_w e^{s_w i Lambda_w})
/// with h the sum of the c_w, so that the exponent vanishes at zero times.
inline double spectral_offset(const ExponentForm& form) {
    double h = 0.0;
    for (const auto& term : form.terms) h -= term.coeff;
    return h;
}

struct CoefficientResult {
    double value = 0.0;      // sum of contributions with q <= q_max
    double last_shell = 0.0; // |contribution of the q = q_max shell|, remainder estimate
};

/// Weight C_{p1 p2 p3} of the spectral component e^{i Lambda_p}, truncated at
/// total displacement order 2*q_max. Out-of-support p gives exactly zero.
inline CoefficientResult coefficient_with_remainder(const ExponentForm& form,
                                                    std::array<int, 3> p, int q_max) {
    const auto w = detail::windows_of(form);
    // windows order: 100, 010, 001, 110, 011, 111
    const auto& c = w.c;
    const auto& s = w.s;
    CoefficientResult out;
    for (int n110 = 0; n110 <= q_max; ++n110) {
        for (int n111 = 0; n111 + n110 <= q_max; ++n111) {
            const int n100 = s[0] * (p[0] - s[3] * n110 - s[5] * n111);
            if (n100 < 0 || n100 + n110 + n111 > q_max) continue;
            for (int n011 = 0; n100 + n110 + n111 + n011 <= q_max; ++n011) {
                const int n010 = s[1] * (p[1] - s[4] * n011 - s[3] * n110 - s[5] * n111);
                const int n001 = s[2] * (p[2] - s[4] * n011 - s[5] * n111);
                if (n010 < 0 || n001 < 0) continue;
                const int q = n100 + n010 + n001 + n110 + n011 + n111;
                if (q > q_max) continue;
                const double term = std::pow(c[0], n100) * std::pow(c[1], n010) *
                                    std::pow(c[2], n001) * std::pow(c[3], n110) *
                                    std::pow(c[4], n011) * std::pow(c[5], n111) /
                                    (detail::factorial(n100) * detail::factorial(n010) *
                                     detail::factorial(n001) * detail::factorial(n110) *
                                     detail::factorial(n011) * detail::factorial(n111));
                out.value += term;
                if (q == q_max) out.last_shell += std::abs(term);
            }
        }
    }
    return out;
}

inline double coefficient(const ExponentForm& form, std::array<int, 3> p, int q_max) {
    return coefficient_with_remainder(form, p, q_max).value;
}

/// Spec surface taking (kind, levels, displacements) directly.
inline double coefficient(int kind, const ThirdOrderLevels& lv, std::span<const double> z,
                          std::array<int, 3> p, int q_max) {
    return coefficient(third_order_form(kind, lv, z), p, q_max);
}

/// Peak amplitude A_{p1,p3}(t2) = e^{-h} sum_{|p2| <= p2_max} C_{p1 p2 p3} e^{i p2 w t2}.
inline Complex peak_amplitude(const ExponentForm& form, int p1, int p3, double t2,
                              int q_max = 16, int p2_max = 12) {
    const double h = spectral_offset(form);
    const double omega = form.omegas[0];
    Complex a{0.0, 0.0};
    for (int p2 = -p2_max; p2 <= p2_max; ++p2) {
        const double cp = coefficient(form, {p1, p2, p3}, q_max);
        if (cp != 0.0) a += cp * std::polar(1.0, p2 * omega * t2);
    }
    return std::exp(-h) * a;
}

inline Complex peak_amplitude(int kind, const ThirdOrderLevels& lv, std::span<const double> z,
                              int p1, int p3, double t2, int q_max = 16, int p2_max = 12,
                              double omega = 1.0) {
    return peak_amplitude(third_order_form(kind, lv, z, omega), p1, p3, t2, q_max, p2_max);
}

/// Uniform time axis {start + i*step : i < count}.
struct TimeGrid {
    double start = 0.0;
    double step = 0.0;
    int count = 1;

    double at(int i) const { return start + step * i; }
    void validate() const {
        if (count < 1) throw ConfigError("grid count must be >= 1");
        if (count > 1 && !(step > 0.0)) throw ConfigError("grid step must be positive");
    }
};

/// 2D complex spectrum over (omega1, omega3), frequencies in ascending order.
struct Spectrum2D {
    std::vector<double> omega1;
    std::vector<double> omega3;
    std::vector<Complex> data; // row-major: data[i1 * omega3.size() + i3]

    Complex at(size_t i1, size_t i3) const { return data[i1 * omega3.size() + i3]; }
};

/// Double half-sided Fourier transform of response(t1,t3) * e^{-gamma(t1+t3)}
/// with the convention e^{+i w1 t1} e^{+i w3 t3}, so rephasing signals appear
/// at negative w1. Endpoint samples carry trapezoid weight 1/2 and the grids
/// are zero-padded by 4x (to the next power of two) before the FFT.
inline Spectrum2D spectrum_2d(const std::function<Complex(double, double)>& response,
                              const TimeGrid& g1, const TimeGrid& g3, double gamma,
                              int pad_factor = 4) {
    g1.validate();
    g3.validate();
    if (gamma < 0.0) throw ConfigError("gamma must be nonnegative");
    if (g1.start != 0.0 || g3.start != 0.0)
        throw ConfigError("spectrum grids must start at t = 0");

    const size_t n1 = next_pow2(static_cast<size_t>(g1.count) * static_cast<size_t>(pad_factor));
    const size_t n3 = next_pow2(static_cast<size_t>(g3.count) * static_cast<size_t>(pad_factor));

    // Sample the broadened response, parallel over t1 rows, indexed writes.
    std::vector<Complex> rows(static_cast<size_t>(g1.count) * static_cast<size_t>(g3.count));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int njobs = static_cast<int>(std::min<size_t>(hw, static_cast<size_t>(g1.count)));
    std::vector<std::future<void>> jobs;
    for (int job = 0; job < njobs; ++job) {
        jobs.push_back(std::async(std::launch::async, [&, job] {
            for (int i1 = job; i1 < g1.count; i1 += njobs) {
                const double t1 = g1.at(i1);
                for (int i3 = 0; i3 < g3.count; ++i3) {
                    const double t3 = g3.at(i3);
                    const double w1 = (i1 == 0 ? 0.5 : 1.0) * (i3 == 0 ? 0.5 : 1.0);
                    rows[static_cast<size_t>(i1) * g3.count + i3] =
                        w1 * response(t1, t3) * std::exp(-gamma * (t1 + t3));
                }
            }
        }));
    }
    for (auto& j : jobs) j.get();

    // FFT over t3 (per row), then over t1 (per column).
    std::vector<std::vector<Complex>> spec(n1, std::vector<Complex>(n3, Complex{0, 0}));
    for (int i1 = 0; i1 < g1.count; ++i1) {
        std::vector<Complex> row(n3, Complex{0, 0});
        for (int i3 = 0; i3 < g3.count; ++i3)
            row[static_cast<size_t>(i3)] = rows[static_cast<size_t>(i1) * g3.count + i3];
        fft_radix2(row, +1);
        spec[static_cast<size_t>(i1)] = std::move(row);
    }
    for (size_t k3 = 0; k3 < n3; ++k3) {
        std::vector<Complex> col(n1, Complex{0, 0});
        for (size_t i1 = 0; i1 < static_cast<size_t>(g1.count); ++i1) col[i1] = spec[i1][k3];
        fft_radix2(col, +1);
        for (size_t k1 = 0; k1 < n1; ++k1) spec[k1][k3] = col[k1];
    }

    // Shift to ascending frequency order and scale by the time steps.
    Spectrum2D out;
    out.omega1.resize(n1);
    out.omega3.resize(n3);
    const double dw1 = 2.0 * pi / (static_cast<double>(n1) * g1.step);
    const double dw3 = 2.0 * pi / (static_cast<double>(n3) * g3.step);
    for (size_t k = 0; k < n1; ++k)
        out.omega1[k] = (static_cast<double>(k) - static_cast<double>(n1 / 2)) * dw1;
    for (size_t k = 0; k < n3; ++k)
        out.omega3[k] = (static_cast<double>(k) - static_cast<double>(n3 / 2)) * dw3;
    out.data.resize(n1 * n3);
    for (size_t k1 = 0; k1 < n1; ++k1) {
        const size_t src1 = (k1 + n1 / 2) % n1; // unshifted index of ascending bin k1
        for (size_t k3 = 0; k3 < n3; ++k3) {
            const size_t src3 = (k3 + n3 / 2) % n3;
            out.data[k1 * n3 + k3] = spec[src1][src3] * (g1.step * g3.step);
        }
    }
    return out;
}

} // namespace vrf
