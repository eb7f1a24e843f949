#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vrf/bath.hpp"
#include "vrf/fock.hpp"
#include "vrf/thermal.hpp"
#include "vrf/third_order.hpp"

using namespace vrf;
using Catch::Approx;

TEST_CASE("delta phase vanishes for alpha0 = 0 and for matching z sequences") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    const auto p = third_order_pathway(2, {1, 2, -1});
    const std::vector<double> ts = {0.7, 1.2, 0.4};
    CHECK(delta_phase(model, p, ts, {0.0, 0.0}) == 0.0);

    // z_{b_j} = z_{k_j} for all j when the excited level carries no displacement
    VibronicModel flat = VibronicModel::v_scheme(0.0, 0.7);
    const auto p11 = third_order_pathway(2, {1, 1, -1}); // only level 1 (z = 0) involved
    CHECK(std::abs(delta_phase(flat, p11, ts, {0.4, -0.3})) < 1e-15);
}

TEST_CASE("the two delta-phase expressions agree and give a pure phase") {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi),
        ad(-1.0, 1.0);
    for (int kind = 1; kind <= 8; ++kind) {
        const double z1 = zd(rng), z2 = zd(rng);
        const auto model = kind_uses_double(kind) ? VibronicModel::xi_scheme(z1, z2)
                                                  : VibronicModel::v_scheme(z1, z2);
        const ThirdOrderLevels lv =
            kind_uses_double(kind) ? ThirdOrderLevels{1, 1, 2} : ThirdOrderLevels{1, 2, -1};
        const auto p = third_order_pathway(kind, lv);
        for (int i = 0; i < 10; ++i) {
            const std::vector<double> ts = {td(rng), td(rng), td(rng)};
            const Complex a0{ad(rng), ad(rng)};
            const double d1 = delta_phase(model, p, ts, a0);
            const double d2 = delta_phase_sum(model, p, ts, a0);
            CHECK(d1 == Approx(d2).margin(1e-12));
            const Complex r0 = response_from_run(run_pathway(model, p, ts));
            const Complex ra = response_from_run(run_pathway(model, p, ts, 0, a0));
            CHECK(std::abs(ra - std::polar(1.0, d1) * r0) < 1e-12);
            CHECK(std::abs(std::abs(ra) - std::abs(r0)) < 1e-12);
        }
    }
}

TEST_CASE("kind 5 with displaced vacuum matches the Fock oracle") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    const ThirdOrderLevels lv{1, 2, -1};
    const auto p = third_order_pathway(5, lv);
    const Complex a0{0.3, 0.2};
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> td(0.0, 4.0 * pi);
    for (int i = 0; i < 10; ++i) {
        const std::vector<double> ts = {td(rng), td(rng), td(rng)};
        const Complex oracle = fock::brute_force_response(
            model, p, ts, fock::CoherentInit{a0}, {64, true, 1e-10});
        const double dphi = delta_phase(model, p, ts, a0);
        const Complex closed =
            std::polar(1.0, dphi) *
            r_v3(5, lv, model.modes[0].displacements, ts[0], ts[1], ts[2]);
        CHECK(std::abs(oracle - closed) < 1e-10);
    }
}

TEST_CASE("thermal response reduces to the bare value at T = 0") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    const auto form = build_exponent(model, third_order_pathway(1, {1, 2, -1}));
    const std::vector<double> ts = {0.8, 1.3, 0.5};
    CHECK(std::abs(thermal_response(form, ts, 0.0) - evaluate(form, ts)) < 1e-14);
    CHECK(coth_factor(0.0) == 1.0);
    CHECK(mean_occupation(0.0) == 0.0);
}

TEST_CASE("|R_T| = |R_0|^coth as a modulus identity") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi);
    for (int i = 0; i < 50; ++i) {
        const auto model = VibronicModel::v_scheme(zd(rng), zd(rng));
        const auto form = build_exponent(model, third_order_pathway(2, {1, 2, -1}));
        const std::vector<double> ts = {td(rng), td(rng), td(rng)};
        const double T = 0.3 + 2.0 * (i % 7) / 7.0;
        const Complex r0 = evaluate(form, ts);
        const Complex rt = thermal_response(form, ts, T);
        CHECK(std::abs(rt) == Approx(std::pow(std::abs(r0), coth_factor(T))).margin(1e-13));
        CHECK(std::abs(rt - thermal_scale(r0, T)) < 1e-13);
    }
}

TEST_CASE("thermal modulus never grows with temperature") {
    const auto model = VibronicModel::two_level(0.5);
    const auto form = build_exponent(model, third_order_pathway(2, {1, 1, -1}));
    const std::vector<double> ts = {0.9, 0.4, 1.7};
    double prev = std::abs(thermal_response(form, ts, 0.0));
    for (double T : {0.2, 0.5, 1.0, 2.0, 4.0}) {
        const double cur = std::abs(thermal_response(form, ts, T));
        CHECK(cur <= prev + 1e-14);
        prev = cur;
    }
}

TEST_CASE("thermal closed form matches the thermal Fock oracle") {
    const auto model = VibronicModel::two_level(0.4);
    const ThirdOrderLevels lv{1, 1, -1};
    const double temperature = 1.0;
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> td(0.0, 4.0 * pi);
    for (int i = 0; i < 10; ++i) {
        const std::vector<double> ts = {td(rng), td(rng), td(rng)};
        const Complex r0 = r_v3(2, lv, model.modes[0].displacements, ts[0], ts[1], ts[2]);
        const Complex oracle =
            fock::brute_force_response(model, third_order_pathway(2, lv), ts,
                                       fock::ThermalInit{temperature}, {64, false, 0.0});
        CHECK(std::abs(thermal_scale(r0, temperature) - oracle) < 1e-8);
    }
}

TEST_CASE("P-function averaging over a thermal sampler recovers the coth scaling") {
    // quasi Monte Carlo over the Gaussian P function, spiral low-discrepancy
    const auto model = VibronicModel::two_level(0.4);
    const auto p = third_order_pathway(2, {1, 1, -1});
    const std::vector<double> ts = {0.9, 1.4, 0.6};
    const double temperature = 1.0;
    const double nbar = mean_occupation(temperature);
    const int n = 200000;
    auto sampler = [&](int i) {
        // Fibonacci-spiral points of the radial Gaussian measure
        const double u = (i + 0.5) / n;
        const double r = std::sqrt(-nbar * std::log1p(-u));
        const double th = 2.0 * pi * std::fmod(i * 0.6180339887498949, 1.0);
        return std::polar(r, th);
    };
    const Complex averaged = average_over_initial(model, p, ts, sampler, n);
    const Complex r0 = response_from_run(run_pathway(model, p, ts));
    CHECK(std::abs(averaged - thermal_scale(r0, temperature)) < 1e-4);
}

TEST_CASE("lineshape g basics") {
    const auto lines = SpectralDensity::lines({{1.0, 0.36}});
    CHECK(std::abs(lineshape_g(lines, 0.0, 0.0)) == 0.0);
    // single line of weight z^2 at T = 0: z^2 (1 - cos wt) + i z^2 sin wt
    const double t = 1.7;
    const Complex g = lineshape_g(lines, t, 0.0);
    CHECK(g.real() == Approx(0.36 * (1.0 - std::cos(t))).margin(1e-14));
    CHECK(g.imag() == Approx(0.36 * std::sin(t)).margin(1e-14));
    CHECK(g.real() >= 0.0);
}

TEST_CASE("ohmic lineshape matches the analytic T = 0 form and a trapezoid oracle") {
    const double eta = 0.8, wc = 1.3;
    const auto sd = SpectralDensity::ohmic(eta, wc);
    const double a = 1.0 / wc;
    for (double t : {0.13, 0.9, 2.7, 8.0}) {
        const Complex g = lineshape_g(sd, t, 0.0, 1e-11);
        const double denom = (a * a + t * t) * (a * a + t * t);
        const Complex exact{eta * (wc * wc - (a * a - t * t) / denom),
                            eta * 2.0 * a * t / denom};
        CHECK(std::abs(g - exact) < 1e-9);

        // independent high-resolution trapezoid
        const int n = 400000;
        const double wmax = wc * 60.0;
        Complex trap{0.0, 0.0};
        const double dw = wmax / n;
        for (int i = 0; i <= n; ++i) {
            const double w = i * dw;
            const double s = eta * w * std::exp(-w / wc);
            const Complex val{s * (1.0 - std::cos(w * t)), s * std::sin(w * t)};
            trap += ((i == 0 || i == n) ? 0.5 : 1.0) * val;
        }
        trap *= dw;
        CHECK(std::abs(g - trap) < 1e-8);
    }
}

TEST_CASE("lineshape small-time orders: Im ~ t, Re ~ t^2") {
    const auto sd = SpectralDensity::ohmic(0.5, 1.0);
    const double t0 = 1e-4;
    const Complex g1 = lineshape_g(sd, t0, 0.7);
    const Complex g2 = lineshape_g(sd, 2.0 * t0, 0.7);
    CHECK(g2.imag() / g1.imag() == Approx(2.0).epsilon(1e-3));
    CHECK(g2.real() / g1.real() == Approx(4.0).epsilon(1e-3));
}

TEST_CASE("tabulated densities that stay finite at omega -> 0 are rejected at T > 0") {
    const auto flat = SpectralDensity::tabulated({{1e-8, 1.0}, {1e-4, 1.0}, {1.0, 1.0}});
    CHECK_THROWS_AS(lineshape_g(flat, 1.0, 0.5), NumericsError);
    CHECK_NOTHROW(lineshape_g(flat, 1.0, 0.0));
}

TEST_CASE("spectral densities load from specs and two-column tables") {
    const auto ohmic = parse_spectral_density("ohmic:0.8,1.3");
    CHECK(ohmic.kind == SpectralDensity::Kind::Ohmic);
    CHECK(ohmic.eta == 0.8);
    CHECK(ohmic.omega_c == 1.3);

    const std::string path = "density_table_test.txt";
    {
        std::ofstream out(path);
        out << "# omega  s\n0.5 0.1\n1.0 0.3\n2.0 0.05\n";
    }
    const auto tab = parse_spectral_density(path);
    REQUIRE(tab.kind == SpectralDensity::Kind::Tabulated);
    REQUIRE(tab.table.size() == 3);
    CHECK(tab.table[1] == std::pair{1.0, 0.3});
    std::remove(path.c_str());

    CHECK_THROWS_AS(parse_spectral_density("ohmic:0.8"), ConfigError);
    CHECK_THROWS_AS(parse_spectral_density("/no/such/density.txt"), ConfigError);
}

TEST_CASE("bath exponent with all densities zero gives response 1") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    BathDensities bath;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int e = 0; e < 3; ++e)
                    if (a != b && c != e)
                        bath.set({a, b}, {c, e}, SpectralDensity::lines({{1.0, 0.0}}));
    const Complex f = third_order_bath_exponent(2, {1, 2, -1}, bath, 0.7, 1.1, 0.3, 0.0);
    CHECK(std::abs(f) < 1e-15);
}

TEST_CASE("missing pair density is an explicit error") {
    BathDensities bath;
    CHECK_THROWS_AS(third_order_bath_exponent(5, {1, 2, -1}, bath, 1.0, 1.0, 1.0, 0.0),
                    NumericsError);
}

TEST_CASE("delta-density collapse reproduces ln r_v3 for every kind") {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> zd(-1.0, 1.0), td(0.0, 4.0 * pi);
    for (int kind = 1; kind <= 8; ++kind) {
        const double z1 = zd(rng), z2 = zd(rng);
        const auto model = kind_uses_double(kind) ? VibronicModel::xi_scheme(z1, z2)
                                                  : VibronicModel::v_scheme(z1, z2);
        const ThirdOrderLevels lv =
            kind_uses_double(kind) ? ThirdOrderLevels{1, 1, 2} : ThirdOrderLevels{1, 2, -1};
        BathDensities bath;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int e = 0; e < 3; ++e)
                        if (a != b && c != e)
                            bath.set({a, b}, {c, e},
                                     delta_density_from_model(model, {a, b}, {c, e}));
        for (int i = 0; i < 5; ++i) {
            const double t1 = td(rng), t2 = td(rng), t3 = td(rng);
            const Complex f = third_order_bath_exponent(kind, lv, bath, t1, t2, t3, 0.0);
            const Complex direct =
                r_v3(kind, lv, model.modes[0].displacements, t1, t2, t3);
            CHECK(std::abs(std::exp(f) - direct) < 1e-10);
        }
    }
}

TEST_CASE("delta-density collapse also holds at finite temperature") {
    const auto model = VibronicModel::two_level(0.4);
    const ThirdOrderLevels lv{1, 1, -1};
    BathDensities bath;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int e = 0; e < 2; ++e)
                    if (a != b && c != e)
                        bath.set({a, b}, {c, e},
                                 delta_density_from_model(model, {a, b}, {c, e}));
    const double T = 0.8;
    for (int kind : {1, 2, 5}) {
        const Complex f = third_order_bath_exponent(kind, lv, bath, 0.9, 1.2, 0.5, T);
        const Complex direct =
            thermal_scale(r_v3(kind, lv, model.modes[0].displacements, 0.9, 1.2, 0.5), T);
        CHECK(std::abs(std::exp(f) - direct) < 1e-10);
    }
}

TEST_CASE("system and bath responses factorize exactly") {
    // Treat the second mode of a two-mode model as a "bath" of one delta line:
    // the product of the strong-mode response and the bath exponential equals
    // the multimode response.
    VibronicModel model = VibronicModel::v_scheme(0.4, -0.7);
    model.modes.push_back(Mode{1.7, {0.0, 0.2, -0.3}});
    const ThirdOrderLevels lv{1, 2, -1};
    BathDensities bath;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int e = 0; e < 3; ++e)
                    if (a != b && c != e)
                        bath.set({a, b}, {c, e},
                                 delta_density_from_model(model, {a, b}, {c, e}, 1));
    const double t1 = 0.8, t2 = 1.1, t3 = 0.4;
    const Complex strong =
        r_v3(2, lv, model.modes[0].displacements, t1, t2, t3, model.modes[0].omega);
    const Complex bath_factor =
        std::exp(third_order_bath_exponent(2, lv, bath, t1, t2, t3, 0.0));
    const Complex both = r_v3_multimode(model, 2, lv, t1, t2, t3);
    CHECK(std::abs(strong * bath_factor - both) < 1e-13);
}
