#pragma once

#include <cmath>
#include <functional>
#include <span>

#include "vrf/coherent.hpp"
#include "vrf/exponent.hpp"
#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

/// Mean phonon number <n> = 1/(e^{omega/T} - 1); T in units of hbar*omega_v/k_B.
inline double mean_occupation(double temperature, double omega = 1.0) {
    if (temperature < 0.0) throw ModelError("temperature must be nonnegative");
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

/// coth(omega / 2T) = 1 + 2<n>; equals 1 at T = 0.
inline double coth_factor(double temperature, double omega = 1.0) {
    return 1.0 + 2.0 * mean_occupation(temperature, omega);
}

/// Thermal scaling of a response value: the real part of the exponent is
/// multiplied by coth(omega/2T), the imaginary part is untouched. Applied to
/// ln R this is exact independent of any 2*pi phase ambiguity.
inline Complex thermal_scale(Complex r, double temperature, double omega = 1.0) {
    if (r == Complex{0.0, 0.0}) return r;
    const double c = coth_factor(temperature, omega);
    return std::polar(std::pow(std::abs(r), c), std::arg(r));
}

/// exp[coth * Re f + i Im f] evaluated from a symbolic exponent. All modes of
/// the form share the single temperature; the coth factor uses each mode's
/// own frequency.
inline Complex thermal_response(const ExponentForm& form, std::span<const double> times,
                                double temperature) {
    if (times.size() != static_cast<size_t>(form.order))
        throw PathwayError("waiting-time count does not match exponent order");
    Complex f{0.0, 0.0};
    for (const auto& term : form.terms) {
        double tw = 0.0;
        for (int i = term.first; i <= term.last; ++i) tw += times[static_cast<size_t>(i - 1)];
        const double omega = form.omegas[static_cast<size_t>(term.mode)];
        const Complex chi = term.coeff * (1.0 - std::polar(1.0, term.sign * omega * tw));
        f += Complex{coth_factor(temperature, omega) * chi.real(), chi.imag()};
    }
    return std::exp(f);
}

/// Initial-state phase shift for a coherent alpha0:
///   dphi = 2 Im[alpha0^* (alpha_ket - alpha_bra) e^{i omega sum(t)}]
/// so that R_{alpha0} = e^{i dphi} R_0; the modulus is unchanged.
inline double delta_phase(const VibronicModel& model, const Pathway& pathway,
                          std::span<const double> times, Complex alpha0, int mode = 0) {
    if (alpha0 == Complex{0.0, 0.0}) return 0.0;
    const auto run = run_pathway(model, pathway, times, mode, Complex{0.0, 0.0});
    double total = 0.0;
    for (double t : times) total += t;
    const double omega = model.modes[static_cast<size_t>(mode)].omega;
    const Complex diff = run.ket.back().alpha - run.bra.back().alpha;
    return 2.0 * std::imag(std::conj(alpha0) * diff * std::polar(1.0, omega * total));
}

/// Equivalent sum form over the waiting times (the per-step expression).
inline double delta_phase_sum(const VibronicModel& model, const Pathway& pathway,
                              std::span<const double> times, Complex alpha0, int mode = 0) {
    pathway.validate(model);
    const Mode& md = model.modes[static_cast<size_t>(mode)];
    const auto ks = pathway.ket_levels();
    const auto bs = pathway.bra_levels();
    double elapsed = 0.0, dphi = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        const double zb = md.displacements[static_cast<size_t>(bs[i])];
        const double zk = md.displacements[static_cast<size_t>(ks[i])];
        const Complex window = (std::polar(1.0, md.omega * times[i]) - 1.0) *
                               std::polar(1.0, md.omega * elapsed);
        dphi += 2.0 * (zb - zk) * std::imag(std::conj(alpha0) * window);
        elapsed += times[i];
    }
    return dphi;
}

/// Average of the zero-temperature response over initial coherent states drawn
/// from a user-supplied P-function sampler: R = R_0 * <e^{i dphi(alpha0)}>.
inline Complex average_over_initial(const VibronicModel& model, const Pathway& pathway,
                                    std::span<const double> times,
                                    const std::function<Complex(int)>& sampler,
                                    int n_samples, int mode = 0) {
    if (n_samples < 1) throw NumericsError("need at least one P-function sample");
    const auto run = run_pathway(model, pathway, times, mode, Complex{0.0, 0.0});
    const Complex r0 = response_from_run(run);
    double total = 0.0;
    for (double t : times) total += t;
    const double omega = model.modes[static_cast<size_t>(mode)].omega;
    const Complex diff = run.ket.back().alpha - run.bra.back().alpha;
    Complex acc{0.0, 0.0};
    for (int i = 0; i < n_samples; ++i) {
        const Complex a0 = sampler(i);
        const double dphi =
            2.0 * std::imag(std::conj(a0) * diff * std::polar(1.0, omega * total));
        acc += std::polar(1.0, dphi);
    }
    return r0 * (acc / static_cast<double>(n_samples));
}

} // namespace vrf
