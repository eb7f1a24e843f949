#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "vrf/coherent.hpp"
#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

/// One term coeff * (1 - e^{sign * i * omega_xi * (t_first+...+t_last)}) in the
/// exponent of a vibrational response function. `decay` holds, per waiting
/// time, the multiplicity with which that time contributes vibrational decay
/// e^{-kappa t / 2}; it comes from the diagram intervals that build the term
/// and is used only when kappa > 0.
struct ExponentTerm {
    double coeff = 0.0;
    int mode = 0;
    int sign = +1;        // +1 -> e^{+i omega T} (chi*), -1 -> e^{-i omega T} (chi)
    int first = 1;        // window [first..last], 1-based waiting-time indices
    int last = 1;
    std::array<int, 2> pair_a{0, 0}; // level pair (from,to) of the first delimiting arrow
    std::array<int, 2> pair_b{0, 0}; // level pair of the second delimiting arrow
    std::vector<int> decay;          // per waiting time, size M

    std::string label() const {
        auto z = [](const std::array<int, 2>& p) {
            return "z[" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "]";
        };
        return z(pair_a) + "*" + z(pair_b);
    }
};

/// Symbolic exponent of ln R^{(v,M)}: M(M+1)/2 terms per mode. Evaluation at
/// all-zero times gives exactly 0, hence R = 1.
struct ExponentForm {
    int order = 0;                 // M
    std::vector<double> omegas;    // per mode
    std::vector<ExponentTerm> terms;
};

namespace detail {

// One v-interval of the diagram: the waiting times [begin..end] between two
// consecutive same-side arrows (emission closes the ket side), its phase sign,
// and the electronic level occupied there.
struct VInterval {
    int begin = 1;
    int end = 0;
    int sign = +1; // +1 bra side, -1 ket side
    int level = 0;
};

struct DiagramStructure {
    std::vector<VInterval> vs;   // v_1 .. v_M in the order of the formal product
    std::vector<int> levels;     // j_0 .. j_{M+1} counterclockwise
    std::vector<std::array<int, 2>> arrows; // (from,to) per counterclockwise arrow 1..M+1
};

inline DiagramStructure diagram_structure(const Pathway& pathway) {
    const int M = pathway.order();
    std::vector<int> bra_pos, ket_pos;
    for (int i = 0; i < M; ++i)
        (pathway.interactions[static_cast<size_t>(i)].side == Side::Bra ? bra_pos : ket_pos)
            .push_back(i + 1);

    DiagramStructure d;
    d.levels.push_back(0);
    // Bra intervals in time order, then ket intervals in reverse time order.
    for (size_t i = 0; i < bra_pos.size(); ++i) {
        const int begin = bra_pos[i];
        const int end = (i + 1 < bra_pos.size()) ? bra_pos[i + 1] - 1 : M;
        const auto& ia = pathway.interactions[static_cast<size_t>(begin - 1)];
        d.vs.push_back({begin, end, +1, ia.to});
    }
    std::vector<VInterval> ketv;
    for (size_t i = 0; i < ket_pos.size(); ++i) {
        const int begin = ket_pos[i];
        const int end = (i + 1 < ket_pos.size()) ? ket_pos[i + 1] - 1 : M;
        const auto& ia = pathway.interactions[static_cast<size_t>(begin - 1)];
        ketv.push_back({begin, end, -1, ia.to});
    }
    for (auto it = ketv.rbegin(); it != ketv.rend(); ++it) d.vs.push_back(*it);

    for (const auto& v : d.vs) d.levels.push_back(v.level);
    d.levels.push_back(0);
    for (size_t q = 0; q + 1 < d.levels.size(); ++q)
        d.arrows.push_back({d.levels[q], d.levels[q + 1]});
    return d;
}

} // namespace detail

/// Build the exponent of R^{(v,M)} for a pathway directly from its diagram:
/// every pair of counterclockwise arrows contributes one term per mode.
inline ExponentForm build_exponent(const VibronicModel& model, const Pathway& pathway) {
    pathway.validate(model);
    const int M = pathway.order();
    const auto d = detail::diagram_structure(pathway);

    ExponentForm form;
    form.order = M;
    for (const auto& md : model.modes) form.omegas.push_back(md.omega);

    for (int a = 1; a <= M; ++a) {
        for (int b = a; b <= M; ++b) {
            // product v_a ... v_b: signed coefficients per waiting time
            std::vector<int> c(static_cast<size_t>(M) + 1, 0);
            std::vector<int> dcount(static_cast<size_t>(M), 0);
            for (int p = a; p <= b; ++p) {
                const auto& v = d.vs[static_cast<size_t>(p - 1)];
                for (int i = v.begin; i <= v.end; ++i) {
                    c[static_cast<size_t>(i)] += v.sign;
                    dcount[static_cast<size_t>(i - 1)] += 1;
                }
            }
            // The survivors form one contiguous window of uniform sign; mixed
            // windows with the tie case cannot occur for a valid diagram.
            int first = 0, last = 0, sign = 0;
            for (int i = 1; i <= M; ++i) {
                const int ci = c[static_cast<size_t>(i)];
                if (ci == 0) continue;
                assert(ci == 1 || ci == -1);
                if (first == 0) {
                    first = i;
                    sign = ci;
                }
                assert(ci == sign);
                assert(last == 0 || last == i - 1);
                last = i;
            }
            assert(first != 0);

            const auto& pa = d.arrows[static_cast<size_t>(a - 1)];
            const auto& pb = d.arrows[static_cast<size_t>(b)];
            for (int xi = 0; xi < model.n_modes(); ++xi) {
                const auto& z = model.modes[static_cast<size_t>(xi)].displacements;
                ExponentTerm term;
                term.coeff = (z[static_cast<size_t>(pa[0])] - z[static_cast<size_t>(pa[1])]) *
                             (z[static_cast<size_t>(pb[0])] - z[static_cast<size_t>(pb[1])]);
                term.mode = xi;
                term.sign = sign;
                term.first = first;
                term.last = last;
                term.pair_a = pa;
                term.pair_b = pb;
                term.decay = dcount;
                form.terms.push_back(std::move(term));
            }
        }
    }
    return form;
}

/// The exponent f = sum of coeff*(1 - e^{s i omega T_w}) itself.
inline Complex evaluate_exponent(const ExponentForm& form, std::span<const double> times) {
    if (times.size() != static_cast<size_t>(form.order))
        throw PathwayError("waiting-time count does not match exponent order");
    Complex f{0.0, 0.0};
    for (const auto& term : form.terms) {
        double tw = 0.0;
        for (int i = term.first; i <= term.last; ++i) tw += times[static_cast<size_t>(i - 1)];
        const double omega = form.omegas[static_cast<size_t>(term.mode)];
        f += term.coeff * (1.0 - std::polar(1.0, term.sign * omega * tw));
    }
    return f;
}

/// exp(f); |result| <= 1 for kappa = 0.
inline Complex evaluate(const ExponentForm& form, std::span<const double> times) {
    return std::exp(evaluate_exponent(form, times));
}

/// Relaxed evaluation: each oscillating factor decays with every waiting time
/// covered by the underlying diagram intervals, e^{s i omega T_w - kappa D_w / 2}.
inline Complex evaluate_relaxed(const ExponentForm& form, std::span<const double> times,
                                double kappa) {
    if (times.size() != static_cast<size_t>(form.order))
        throw PathwayError("waiting-time count does not match exponent order");
    Complex f{0.0, 0.0};
    for (const auto& term : form.terms) {
        double tw = 0.0, dw = 0.0;
        for (int i = term.first; i <= term.last; ++i) tw += times[static_cast<size_t>(i - 1)];
        for (size_t i = 0; i < term.decay.size(); ++i) dw += term.decay[i] * times[i];
        const double omega = form.omegas[static_cast<size_t>(term.mode)];
        f += term.coeff *
             (1.0 - std::exp(Complex{-0.5 * kappa * dw, term.sign * omega * tw}));
    }
    return std::exp(f);
}

/// Number of terms per mode; M(M+1)/2 for every valid pathway.
inline int terms_per_mode(const ExponentForm& form) {
    if (form.omegas.empty()) return 0;
    return static_cast<int>(form.terms.size() / form.omegas.size());
}

} // namespace vrf
