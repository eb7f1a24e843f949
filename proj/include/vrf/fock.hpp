#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <variant>
#include <vector>

#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Truncated displacement operator D(z) in the number basis, built column by
/// column from D(z)|n> = (a^dag - z)^n D(z)|0> / sqrt(n!). Every retained
/// matrix element is exact; the only defect is the missing rows above n_max.
inline Matrix displacement(double z, int n_max) {
    if (n_max < 2) throw NumericsError("displacement: n_max must be at least 2");
    Matrix d = Matrix::Zero(n_max, n_max);
    d(0, 0) = std::exp(-0.5 * z * z);
    for (int m = 1; m < n_max; ++m) d(m, 0) = d(m - 1, 0) * z / std::sqrt(double(m));
    for (int n = 1; n < n_max; ++n) {
        const double inv = 1.0 / std::sqrt(double(n));
        d(0, n) = -z * d(0, n - 1) * inv;
        for (int m = 1; m < n_max; ++m)
            d(m, n) = (std::sqrt(double(m)) * d(m - 1, n - 1) - z * d(m, n - 1)) * inv;
    }
    return d;
}

/// exp(-i t (omega - i kappa/2)(a^dag+z)(a+z)) via D(-z) diag D(z).
inline Matrix propagator(double z, double t, double omega, double kappa, int n_max) {
    Matrix dz = displacement(z, n_max);
    for (int m = 0; m < n_max; ++m) {
        const Complex ph = std::exp(Complex{-0.5 * kappa * m * t, -omega * m * t});
        dz.row(m) *= ph; // diag * D(z)
    }
    return displacement(-z, n_max) * dz;
}

struct Vacuum {};
struct CoherentInit {
    Complex alpha0;
};
struct ThermalInit {
    double temperature = 0.0; // units hbar*omega_v/k_B
};
using InitialState = std::variant<Vacuum, CoherentInit, ThermalInit>;

inline Vector coherent_vector(Complex alpha, int n_max) {
    Vector v = Vector::Zero(n_max);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int m = 1; m < n_max; ++m) v(m) = v(m - 1) * alpha / std::sqrt(double(m));
    return v;
}

/// Population in the top 10% of the basis; the adequacy gate for truncation.
inline double tail_population(const Vector& v) {
    const int n = static_cast<int>(v.size());
    const int lo = n - std::max(1, n / 10);
    double p = 0.0;
    for (int m = lo; m < n; ++m) p += std::norm(v(m));
    return p;
}

struct OracleOptions {
    int n_max = 64;
    bool check_adequacy = true;
    double adequacy_tol = 1e-12;
};

/// Literal ket/bra propagation through the pathway's waiting times, one mode.
/// No coherent-state shortcut: each step applies the truncated propagator of
/// the electronic level occupied on that side.
inline Complex brute_force_response(const VibronicModel& model, const Pathway& pathway,
                                    std::span<const double> times,
                                    const InitialState& initial = Vacuum{},
                                    const OracleOptions& opt = {}) {
    pathway.validate(model);
    if (times.size() != static_cast<size_t>(pathway.order()))
        throw PathwayError("waiting-time count does not match pathway order");
    if (model.n_modes() != 1)
        throw NumericsError("single-mode oracle called on a multimode model");
    const Mode& md = model.modes[0];
    const int n = opt.n_max;
    const auto ks = pathway.ket_levels();
    const auto bs = pathway.bra_levels();

    auto step = [&](Vector& v, int level, double t) {
        v = propagator(md.displacements[static_cast<size_t>(level)], t, md.omega,
                       model.kappa, n) *
            v;
    };
    auto run_sides = [&](const Vector& start) {
        Vector ket = start, bra = start;
        for (size_t i = 0; i < times.size(); ++i) {
            step(ket, ks[i], times[i]);
            step(bra, bs[i], times[i]);
        }
        if (opt.check_adequacy) {
            const double tail = std::max(tail_population(ket), tail_population(bra));
            if (tail > opt.adequacy_tol)
                throw NumericsError("oracle truncation inadequate: tail population " +
                                    std::to_string(tail));
        }
        return bra.dot(ket); // conjugates bra
    };

    if (std::holds_alternative<Vacuum>(initial)) {
        Vector v0 = Vector::Zero(n);
        v0(0) = 1.0;
        return run_sides(v0);
    }
    if (const auto* c = std::get_if<CoherentInit>(&initial)) {
        return run_sides(coherent_vector(c->alpha0, n));
    }
    // Thermal: Boltzmann mixture over number states, cut when the remaining
    // weight is negligible or the basis ends.
    const auto& th = std::get<ThermalInit>(initial);
    if (th.temperature <= 0.0) {
        Vector v0 = Vector::Zero(n);
        v0(0) = 1.0;
        return run_sides(v0);
    }
    const double x = std::exp(-md.omega / th.temperature);
    Matrix uket = Matrix::Identity(n, n), ubra = Matrix::Identity(n, n);
    for (size_t i = 0; i < times.size(); ++i) {
        uket = propagator(md.displacements[static_cast<size_t>(ks[i])], times[i], md.omega,
                          model.kappa, n) *
               uket;
        ubra = propagator(md.displacements[static_cast<size_t>(bs[i])], times[i], md.omega,
                          model.kappa, n) *
               ubra;
    }
    const Matrix w = ubra.adjoint() * uket;
    Complex r{0.0, 0.0};
    double weight = 1.0 - x;
    for (int m = 0; m < n; ++m) {
        r += weight * w(m, m);
        weight *= x;
        if (weight < 1e-14 * (1.0 - x)) break;
    }
    return r;
}

/// Two-mode oracle on the joint (n_max x n_max) product space; the joint
/// propagator is applied mode by mode through reshaped matrix products.
inline Complex brute_force_response_two_modes(const VibronicModel& model,
                                              const Pathway& pathway,
                                              std::span<const double> times,
                                              int n_max_each = 32) {
    pathway.validate(model);
    if (model.n_modes() != 2)
        throw NumericsError("two-mode oracle requires exactly two modes");
    const int n = n_max_each;
    const auto ks = pathway.ket_levels();
    const auto bs = pathway.bra_levels();

    // State as an n x n matrix Psi(m0, m1).
    auto step = [&](Matrix& psi, int level, double t) {
        const Matrix u0 = propagator(model.modes[0].displacements[static_cast<size_t>(level)],
                                     t, model.modes[0].omega, model.kappa, n);
        const Matrix u1 = propagator(model.modes[1].displacements[static_cast<size_t>(level)],
                                     t, model.modes[1].omega, model.kappa, n);
        psi = u0 * psi * u1.transpose();
    };
    Matrix ket = Matrix::Zero(n, n), bra = Matrix::Zero(n, n);
    ket(0, 0) = 1.0;
    bra(0, 0) = 1.0;
    for (size_t i = 0; i < times.size(); ++i) {
        step(ket, ks[i], times[i]);
        step(bra, bs[i], times[i]);
    }
    return (bra.conjugate().cwiseProduct(ket)).sum();
}

} // namespace vrf::fock
