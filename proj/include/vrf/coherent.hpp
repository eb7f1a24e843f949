#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

/// Coherent state |alpha> with an accumulated real phase and, under relaxation,
/// an accumulated (nonpositive) log of the norm factor.
struct LabeledCoherentState {
    Complex alpha{0.0, 0.0};
    double phase = 0.0;
    double log_magnitude = 0.0;
};

/// <beta|alpha> = exp(-|alpha-beta|^2/2) exp(i Im(beta^* alpha)).
inline Complex coherent_overlap(Complex bra, Complex ket) {
    const double r = -0.5 * std::norm(ket - bra);
    const double phi = std::imag(std::conj(bra) * ket);
    return std::exp(r) * std::polar(1.0, phi);
}

/// One waiting time under the oscillator displaced by -z:
///   alpha' = (alpha+z) e^{-(kappa/2 + i omega) t} - z
///   phase += z Im(alpha' - alpha)
///   log_magnitude += -|alpha+z|^2 (1 - e^{-kappa t}) / 2
/// With kappa = 0 this is a rotation by omega*t around -z plus the phase g.
inline LabeledCoherentState evolve(const LabeledCoherentState& s, double z, double t,
                                   double omega, double kappa = 0.0) {
    LabeledCoherentState out = s;
    const Complex rot = std::exp(Complex{-0.5 * kappa * t, -omega * t});
    out.alpha = (s.alpha + z) * rot - z;
    out.phase += z * std::imag(out.alpha - s.alpha);
    if (kappa != 0.0)
        out.log_magnitude += -0.5 * std::norm(s.alpha + z) * (1.0 - std::exp(-kappa * t));
    return out;
}

/// Ket and bra ladders over the waiting times; index 0 is the initial state.
struct PathwayRun {
    std::vector<LabeledCoherentState> ket;
    std::vector<LabeledCoherentState> bra;
};

/// Propagate both sides of a pathway through all waiting times for one mode.
inline PathwayRun run_pathway(const VibronicModel& model, const Pathway& pathway,
                              std::span<const double> times, int mode = 0,
                              Complex alpha0 = {}) {
    pathway.validate(model);
    if (times.size() != static_cast<size_t>(pathway.order()))
        throw PathwayError("waiting-time count does not match pathway order");
    const Mode& md = model.modes[static_cast<size_t>(mode)];
    const auto ks = pathway.ket_levels();
    const auto bs = pathway.bra_levels();
    PathwayRun run;
    run.ket.push_back({alpha0, 0.0, 0.0});
    run.bra.push_back({alpha0, 0.0, 0.0});
    for (size_t i = 0; i < times.size(); ++i) {
        run.ket.push_back(evolve(run.ket.back(), md.displacements[static_cast<size_t>(ks[i])],
                                 times[i], md.omega, model.kappa));
        run.bra.push_back(evolve(run.bra.back(), md.displacements[static_cast<size_t>(bs[i])],
                                 times[i], md.omega, model.kappa));
    }
    return run;
}

/// R = e^{log_ket + log_bra} <alpha_bra|alpha_ket> e^{i(a_ket - a_bra)}.
inline Complex response_from_states(const LabeledCoherentState& ket,
                                    const LabeledCoherentState& bra) {
    return std::exp(ket.log_magnitude + bra.log_magnitude) *
           coherent_overlap(bra.alpha, ket.alpha) *
           std::polar(1.0, ket.phase - bra.phase);
}

inline Complex response_from_run(const PathwayRun& run) {
    return response_from_states(run.ket.back(), run.bra.back());
}

/// Single-mode vibrational response of a pathway computed kinematically,
/// multiplied over all modes of the model.
inline Complex kinematic_response(const VibronicModel& model, const Pathway& pathway,
                                  std::span<const double> times, Complex alpha0 = {}) {
    Complex r{1.0, 0.0};
    for (int xi = 0; xi < model.n_modes(); ++xi)
        r *= response_from_run(run_pathway(model, pathway, times, xi, alpha0));
    return r;
}

} // namespace vrf
