#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "vrf/bath.hpp"
#include "vrf/coherent.hpp"
#include "vrf/exponent.hpp"
#include "vrf/fock.hpp"
#include "vrf/model.hpp"
#include "vrf/thermal.hpp"
#include "vrf/third_order.hpp"

namespace vrf {

struct CheckResult {
    std::string name;
    double max_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

/// Random valid pathway with M interactions on an N-level model; both sides
/// start from level 0 and every transition changes the level.
inline Pathway random_pathway(std::mt19937_64& rng, int order, int n_levels) {
    std::uniform_int_distribution<int> side_d(0, 1);
    std::uniform_int_distribution<int> lvl_d(0, n_levels - 1);
    Pathway p;
    int ket = 0, bra = 0;
    for (int i = 0; i < order; ++i) {
        const Side s = side_d(rng) ? Side::Bra : Side::Ket;
        int& cur = (s == Side::Ket) ? ket : bra;
        int to = cur;
        while (to == cur) to = lvl_d(rng);
        p.interactions.push_back({s, cur, to});
        cur = to;
    }
    return p;
}

namespace checks {

/// Criterion-1 style: closed-form r_v3 vs the Fock oracle for every kind,
/// all contributing pathways, random (z, t) draws.
inline CheckResult third_order_oracle(unsigned seed, int draws_per_kind, int n_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi);
    CheckResult res{"third-order closed form vs Fock oracle (n_max=" +
                        std::to_string(n_max) + ")",
                    0.0, 1e-10, false, ""};
    for (int kind = 1; kind <= 8; ++kind) {
        for (int d = 0; d < draws_per_kind; ++d) {
            const double z1 = zd(rng), z2 = zd(rng);
            const double ts[3] = {td(rng), td(rng), td(rng)};
            const VibronicModel model = kind_uses_double(kind)
                                            ? VibronicModel::xi_scheme(z1, z2)
                                            : VibronicModel::v_scheme(z1, z2);
            for (const auto& lv : enumerate_third_order(model, kind)) {
                const Complex closed = r_v3(kind, lv, model.modes[0].displacements, ts[0],
                                            ts[1], ts[2]);
                const Complex oracle = fock::brute_force_response(
                    model, third_order_pathway(kind, lv), ts, fock::Vacuum{},
                    {n_max, true, 1e-12});
                res.max_err = std::max(res.max_err, std::abs(closed - oracle));
            }
        }
    }
    res.pass = res.max_err < res.tol;
    return res;
}

/// Criterion-2 style: recipe-built exponent vs kinematic propagation for
/// random pathways, plus the M(M+1)/2 term count.
inline CheckResult recipe_vs_kinematics(unsigned seed, int n_pathways) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> order_d(1, 6), levels_d(2, 4), modes_d(1, 2);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi),
        wd(0.5, 2.0);
    CheckResult res{"diagram recipe vs kinematic propagation", 0.0, 1e-12, false, ""};
    bool counts_ok = true;
    for (int n = 0; n < n_pathways; ++n) {
        const int M = order_d(rng), N = levels_d(rng), B = modes_d(rng);
        VibronicModel model;
        model.n_levels = N;
        model.energies.assign(static_cast<size_t>(N), 0.0);
        model.manifolds.assign(static_cast<size_t>(N), Manifold::Single);
        model.manifolds[0] = Manifold::Ground;
        for (int b = 0; b < B; ++b) {
            Mode md;
            md.omega = (b == 0) ? 1.0 : wd(rng);
            md.displacements.push_back(0.0);
            for (int j = 1; j < N; ++j) md.displacements.push_back(zd(rng));
            model.modes.push_back(md);
        }
        const Pathway p = random_pathway(rng, M, N);
        std::vector<double> ts(static_cast<size_t>(M));
        for (auto& t : ts) t = td(rng);
        const ExponentForm form = build_exponent(model, p);
        if (terms_per_mode(form) != M * (M + 1) / 2) counts_ok = false;
        const Complex via_form = evaluate(form, ts);
        const Complex via_kin = kinematic_response(model, p, ts);
        res.max_err = std::max(res.max_err, std::abs(via_form - via_kin));
    }
    res.pass = res.max_err < res.tol && counts_ok;
    if (!counts_ok) res.detail = "term count != M(M+1)/2";
    return res;
}

/// Criterion-6 style: thermal Fock oracle vs coth-scaled closed form, and the
/// |R_alpha0| = |R_0| phase-only identity.
inline CheckResult thermal_oracle(unsigned seed, int draws, int n_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi),
        ad(-1.0, 1.0);
    CheckResult res{"thermal coth scaling vs Fock oracle (n_max=" + std::to_string(n_max) +
                        ")",
                    0.0, 1e-8, false, ""};
    const double nbars[2] = {mean_occupation(1.0), 2.0};
    for (int kind : {1, 2, 5}) {
        for (int d = 0; d < draws; ++d) {
            const double z1 = zd(rng);
            const double ts[3] = {td(rng), td(rng), td(rng)};
            const VibronicModel model = VibronicModel::two_level(z1);
            const ThirdOrderLevels lv{1, 1, -1};
            for (double nbar : nbars) {
                const double temperature = 1.0 / std::log1p(1.0 / nbar);
                const Complex r0 =
                    r_v3(kind, lv, model.modes[0].displacements, ts[0], ts[1], ts[2]);
                const Complex scaled = thermal_scale(r0, temperature);
                const Complex oracle = fock::brute_force_response(
                    model, third_order_pathway(kind, lv), ts,
                    fock::ThermalInit{temperature}, {n_max, false, 0.0});
                res.max_err = std::max(res.max_err, std::abs(scaled - oracle));
            }
        }
    }
    res.pass = res.max_err < res.tol;
    return res;
}

inline CheckResult initial_state_phase(unsigned seed, int draws) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi),
        ad(-1.0, 1.0);
    CheckResult res{"coherent initialization is a pure phase", 0.0, 1e-12, false, ""};
    for (int kind = 1; kind <= 8; ++kind) {
        for (int d = 0; d < draws; ++d) {
            const double z1 = zd(rng), z2 = zd(rng);
            const std::vector<double> ts = {td(rng), td(rng), td(rng)};
            const VibronicModel model = kind_uses_double(kind)
                                            ? VibronicModel::xi_scheme(z1, z2)
                                            : VibronicModel::v_scheme(z1, z2);
            const ThirdOrderLevels lv =
                kind_uses_double(kind) ? ThirdOrderLevels{1, 1, 2} : ThirdOrderLevels{1, 2, -1};
            const Pathway p = third_order_pathway(kind, lv);
            const Complex a0{ad(rng), ad(rng)};
            const Complex r0 = response_from_run(run_pathway(model, p, ts, 0));
            const double dphi = delta_phase(model, p, ts, a0);
            const Complex shifted = response_from_run(run_pathway(model, p, ts, 0, a0));
            res.max_err = std::max(res.max_err, std::abs(shifted - std::polar(1.0, dphi) * r0));
            res.max_err = std::max(res.max_err, std::abs(std::abs(shifted) - std::abs(r0)));
        }
    }
    res.pass = res.max_err < res.tol;
    return res;
}

/// Criterion-7 style: relaxed closed forms vs kinematic relaxed evolution vs
/// the non-Hermitian Fock oracle; kappa -> 0 continuity to the unrelaxed form.
inline CheckResult relaxation_oracle(unsigned seed, int draws, int n_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi);
    CheckResult res{"relaxed closed forms vs kinematics vs Fock oracle", 0.0, 1e-8, false,
                    ""};
    double kappa0_err = 0.0;
    for (int kind = 1; kind <= 8; ++kind) {
        for (double kappa : {0.05, 0.1, 0.5}) {
            for (int d = 0; d < draws; ++d) {
                const double z1 = zd(rng), z2 = zd(rng);
                const std::vector<double> ts = {td(rng), td(rng), td(rng)};
                VibronicModel model = kind_uses_double(kind)
                                          ? VibronicModel::xi_scheme(z1, z2)
                                          : VibronicModel::v_scheme(z1, z2);
                model.kappa = kappa;
                const ThirdOrderLevels lv = kind_uses_double(kind)
                                                ? ThirdOrderLevels{1, 1, 2}
                                                : ThirdOrderLevels{1, 2, -1};
                const Pathway p = third_order_pathway(kind, lv);
                const Complex closed = relaxed_r_v3(kind, lv, model.modes[0].displacements,
                                                    ts[0], ts[1], ts[2], kappa);
                const Complex kin = response_from_run(run_pathway(model, p, ts, 0));
                const Complex oracle = fock::brute_force_response(model, p, ts,
                                                                  fock::Vacuum{},
                                                                  {n_max, false, 0.0});
                res.max_err = std::max(res.max_err, std::abs(closed - kin));
                res.max_err = std::max(res.max_err, std::abs(closed - oracle));
                const Complex unrelaxed =
                    r_v3(kind, lv, model.modes[0].displacements, ts[0], ts[1], ts[2]);
                const Complex at_zero = relaxed_r_v3(kind, lv, model.modes[0].displacements,
                                                     ts[0], ts[1], ts[2], 0.0);
                kappa0_err = std::max(kappa0_err, std::abs(at_zero - unrelaxed));
            }
        }
    }
    res.pass = res.max_err < res.tol && kappa0_err < 1e-12;
    res.detail = "kappa=0 limit err " + std::to_string(kappa0_err);
    return res;
}

/// Criterion-8 style: delta-density collapse of the bath exponent tables onto
/// ln r_v3 for every kind at T = 0.
inline CheckResult bath_delta_collapse(unsigned seed, int draws) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi);
    CheckResult res{"bath exponent tables collapse to single-mode forms", 0.0, 1e-10,
                    false, ""};
    for (int kind = 1; kind <= 8; ++kind) {
        for (int d = 0; d < draws; ++d) {
            const double z1 = zd(rng), z2 = zd(rng);
            const VibronicModel model = kind_uses_double(kind)
                                            ? VibronicModel::xi_scheme(z1, z2)
                                            : VibronicModel::v_scheme(z1, z2);
            const ThirdOrderLevels lv = kind_uses_double(kind)
                                            ? ThirdOrderLevels{1, 1, 2}
                                            : ThirdOrderLevels{1, 2, -1};
            BathDensities bath;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    for (int c = 0; c < 3; ++c)
                        for (int e = 0; e < 3; ++e)
                            if (a != b && c != e)
                                bath.set({a, b}, {c, e},
                                         delta_density_from_model(model, {a, b}, {c, e}));
            const double t1 = td(rng), t2 = td(rng), t3 = td(rng);
            const Complex f =
                third_order_bath_exponent(kind, lv, bath, t1, t2, t3, 0.0);
            const Complex direct =
                r_v3(kind, lv, model.modes[0].displacements, t1, t2, t3);
            res.max_err = std::max(res.max_err, std::abs(std::exp(f) - direct));
        }
    }
    res.pass = res.max_err < res.tol;
    return res;
}

} // namespace checks

/// The oracle-backed verification battery behind `vrf verify`.
inline std::vector<CheckResult> run_verification(unsigned seed = 20240810,
                                                 bool quick = false) {
    const int draws = quick ? 10 : 50;
    const int pathways = quick ? 40 : 200;
    std::vector<CheckResult> out;
    out.push_back(checks::third_order_oracle(seed, draws, 64));
    out.push_back(checks::recipe_vs_kinematics(seed + 1, pathways));
    out.push_back(checks::thermal_oracle(seed + 2, quick ? 5 : 25, 64));
    out.push_back(checks::initial_state_phase(seed + 3, quick ? 5 : 50));
    out.push_back(checks::relaxation_oracle(seed + 4, quick ? 2 : 6, 64));
    out.push_back(checks::bath_delta_collapse(seed + 5, quick ? 3 : 10));
    return out;
}

} // namespace vrf
