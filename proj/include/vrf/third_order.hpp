#pragma once

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "vrf/exponent.hpp"
#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

namespace detail {

// Static per-kind data for the six Lambda windows of a third-order response.
// Windows are identified by the triple (p1,p2,p3); `sign` is the sign of the
// oscillating exponent e^{sign i Lambda}; `decay` is the per-waiting-time decay
// multiplicity of the window under vibrational relaxation.
struct ThirdOrderTermSpec {
    std::array<int, 3> p;
    int sign;
    std::array<int, 3> decay;
};

using KindSpec = std::array<ThirdOrderTermSpec, 6>;

inline const KindSpec& kind_spec(int kind) {
    // Order of entries: 100, 010, 001, 110, 011, 111.
    static const std::array<KindSpec, 8> specs = {{
        // kind 1 (SE rephasing)
        {{{{1, 0, 0}, +1, {1, 2, 2}},
          {{0, 1, 0}, -1, {0, 1, 2}},
          {{0, 0, 1}, +1, {0, 0, 1}},
          {{1, 1, 0}, +1, {1, 1, 0}},
          {{0, 1, 1}, -1, {0, 1, 1}},
          {{1, 1, 1}, +1, {1, 1, 1}}}},
        // kind 2 (GSB rephasing)
        {{{{1, 0, 0}, +1, {1, 0, 0}},
          {{0, 1, 0}, +1, {0, 1, 2}},
          {{0, 0, 1}, -1, {0, 0, 1}},
          {{1, 1, 0}, +1, {1, 1, 2}},
          {{0, 1, 1}, +1, {0, 1, 1}},
          {{1, 1, 1}, +1, {1, 1, 1}}}},
        // kind 3 (ESA rephasing)
        {{{{1, 0, 0}, +1, {1, 2, 2}},
          {{0, 1, 0}, -1, {0, 1, 0}},
          {{0, 0, 1}, -1, {0, 0, 1}},
          {{1, 1, 0}, +1, {1, 1, 2}},
          {{0, 1, 1}, -1, {0, 1, 1}},
          {{1, 1, 1}, +1, {1, 1, 1}}}},
        // kind 4 (SE non-rephasing)
        {{{{1, 0, 0}, -1, {1, 2, 2}},
          {{0, 1, 0}, +1, {0, 1, 0}},
          {{0, 0, 1}, +1, {0, 0, 1}},
          {{1, 1, 0}, -1, {1, 1, 2}},
          {{0, 1, 1}, +1, {0, 1, 1}},
          {{1, 1, 1}, -1, {1, 1, 1}}}},
        // kind 5 (GSB non-rephasing)
        {{{{1, 0, 0}, -1, {1, 0, 0}},
          {{0, 1, 0}, -1, {0, 1, 0}},
          {{0, 0, 1}, -1, {0, 0, 1}},
          {{1, 1, 0}, -1, {1, 1, 0}},
          {{0, 1, 1}, -1, {0, 1, 1}},
          {{1, 1, 1}, -1, {1, 1, 1}}}},
        // kind 6 (ESA non-rephasing)
        {{{{1, 0, 0}, -1, {1, 2, 2}},
          {{0, 1, 0}, +1, {0, 1, 2}},
          {{0, 0, 1}, -1, {0, 0, 1}},
          {{1, 1, 0}, -1, {1, 1, 0}},
          {{0, 1, 1}, +1, {0, 1, 1}},
          {{1, 1, 1}, -1, {1, 1, 1}}}},
        // kind 7 (DQC, first)
        {{{{1, 0, 0}, -1, {1, 0, 0}},
          {{0, 1, 0}, -1, {0, 1, 2}},
          {{0, 0, 1}, +1, {0, 0, 1}},
          {{1, 1, 0}, -1, {1, 1, 2}},
          {{0, 1, 1}, -1, {0, 1, 1}},
          {{1, 1, 1}, -1, {1, 1, 1}}}},
        // kind 8 (DQC, second)
        {{{{1, 0, 0}, -1, {1, 0, 0}},
          {{0, 1, 0}, -1, {0, 1, 0}},
          {{0, 0, 1}, -1, {0, 0, 1}},
          {{1, 1, 0}, -1, {1, 1, 0}},
          {{0, 1, 1}, -1, {0, 1, 1}},
          {{1, 1, 1}, -1, {1, 1, 1}}}},
    }};
    check_kind(kind);
    return specs[static_cast<size_t>(kind - 1)];
}

// Window coefficients in the order 100, 010, 001, 110, 011, 111, with the
// convention z_ab = z_a - z_b.
inline std::array<double, 6> kind_coeffs(int kind, double zj, double zk, double zl) {
    const double zlk = zl - zk, zlj = zl - zj, zkl = zk - zl, zjl = zj - zl;
    switch (kind) {
        case 1: return {zj * zk, -zj * zk, zj * zk, zj * zj, zk * zk, -zj * zk};
        case 2: return {zj * zj, -zj * zk, zk * zk, zj * zk, zj * zk, -zj * zk};
        case 3: return {zj * zk, zk * zkl, zlk * zlj, -zj * zkl, zk * zlj, -zj * zlj};
        case 4: return {zj * zk, zk * zk, zj * zk, -zj * zk, -zj * zk, zj * zj};
        case 5: return {zj * zj, zj * zk, zk * zk, -zj * zk, -zj * zk, zj * zk};
        case 6: return {zj * zk, zk * zlj, zlk * zlj, zj * zjl, -zk * zlk, zj * zlk};
        case 7: return {-zj * zlj, zk * zlj, zk * zkl, zj * zk, zlj * zlk, zj * zlk};
        case 8: return {zj * zjl, zlk * zlj, zk * zkl, zj * zlk, zk * zlj, zj * zk};
    }
    return {};
}

} // namespace detail

/// Closed-form exponent of R^{(v,3)}_{p,jk(l)} as printed, one mode. The
/// displacement list is per level; kinds 1,2,4,5 ignore l.
inline ExponentForm third_order_form(int kind, const ThirdOrderLevels& lv,
                                     std::span<const double> z, double omega = 1.0) {
    check_kind(kind);
    if (kind_uses_double(kind) && !lv.has_double())
        throw PathwayError("kinds 3,6,7,8 require a doubly excited level");
    const auto in_range = [&](int idx) { return idx >= 0 && idx < static_cast<int>(z.size()); };
    if (!in_range(lv.j) || !in_range(lv.k) || (lv.has_double() && !in_range(lv.l)))
        throw PathwayError("level index out of range of the displacement list");

    const double zj = z[static_cast<size_t>(lv.j)];
    const double zk = z[static_cast<size_t>(lv.k)];
    const double zl = lv.has_double() ? z[static_cast<size_t>(lv.l)] : 0.0;
    const auto& spec = detail::kind_spec(kind);
    const auto coeffs = detail::kind_coeffs(kind, zj, zk, zl);

    ExponentForm form;
    form.order = 3;
    form.omegas = {omega};
    for (size_t w = 0; w < 6; ++w) {
        ExponentTerm term;
        // kind_coeffs lists the printed coefficients of e^{s i Lambda}; the
        // ExponentTerm convention is coeff * (1 - e^{s i Lambda}).
        term.coeff = -coeffs[w];
        term.mode = 0;
        term.sign = spec[w].sign;
        term.first = 0;
        for (int i = 0; i < 3; ++i) {
            if (spec[w].p[static_cast<size_t>(i)] == 0) continue;
            if (term.first == 0) term.first = i + 1;
            term.last = i + 1;
        }
        term.decay.assign(spec[w].decay.begin(), spec[w].decay.end());
        form.terms.push_back(std::move(term));
    }
    return form;
}

/// Vibrational part of the third-order response, single mode: |result| <= 1.
inline Complex r_v3(int kind, const ThirdOrderLevels& lv, std::span<const double> z,
                    double t1, double t2, double t3, double omega = 1.0) {
    const double ts[3] = {t1, t2, t3};
    return evaluate(third_order_form(kind, lv, z, omega), ts);
}

/// Relaxed closed form: the window phases pick up e^{-kappa/2} decay per
/// covered diagram interval. Reduces to r_v3 at kappa = 0.
inline Complex relaxed_r_v3(int kind, const ThirdOrderLevels& lv, std::span<const double> z,
                            double t1, double t2, double t3, double kappa,
                            double omega = 1.0) {
    if (kappa < 0.0) throw ModelError("kappa must be nonnegative");
    const double ts[3] = {t1, t2, t3};
    return evaluate_relaxed(third_order_form(kind, lv, z, omega), ts, kappa);
}

/// Decomposition R^{(v,3)} = e^r e^{i phi} with r <= 0.
inline std::pair<double, double> r_phi_decomposition(int kind, const ThirdOrderLevels& lv,
                                                     std::span<const double> z, double t1,
                                                     double t2, double t3,
                                                     double omega = 1.0) {
    const auto form = third_order_form(kind, lv, z, omega);
    const double ts[3] = {t1, t2, t3};
    double r = 0.0, phi = 0.0;
    for (const auto& term : form.terms) {
        double tw = 0.0;
        for (int i = term.first; i <= term.last; ++i) tw += ts[i - 1];
        r += term.coeff * (1.0 - std::cos(omega * tw));
        phi -= term.coeff * term.sign * std::sin(omega * tw);
    }
    return {r, phi};
}

/// Vibrational part for every mode of a model, as a product over modes.
inline Complex r_v3_multimode(const VibronicModel& model, int kind,
                              const ThirdOrderLevels& lv, double t1, double t2, double t3) {
    Complex r{1.0, 0.0};
    for (const auto& md : model.modes) {
        r *= r_v3(kind, lv, md.displacements, t1, t2, t3, md.omega);
    }
    return r;
}

/// Full third-order response of a kind: electronic prefactor times the
/// vibrational product, summed over all contributing level combinations.
inline Complex full_response3(const VibronicModel& model, int kind, double t1, double t2,
                              double t3) {
    Complex sum{0.0, 0.0};
    for (const auto& lv : enumerate_third_order(model, kind)) {
        Complex term = electronic_prefactor(model, kind, lv, t1, t2, t3);
        if (model.kappa > 0.0) {
            for (const auto& md : model.modes)
                term *= relaxed_r_v3(kind, lv, md.displacements, t1, t2, t3, model.kappa,
                                     md.omega);
        } else {
            term *= r_v3_multimode(model, kind, lv, t1, t2, t3);
        }
        sum += term;
    }
    return sum;
}

} // namespace vrf
