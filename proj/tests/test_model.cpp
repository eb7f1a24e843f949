#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "vrf/model.hpp"

using namespace vrf;
using Catch::Approx;

TEST_CASE("two-level system has a single kind-2 pathway") {
    const auto model = VibronicModel::two_level(0.4);
    const auto combos = enumerate_third_order(model, 2);
    REQUIRE(combos.size() == 1);
    CHECK(combos[0].j == 1);
    CHECK(combos[0].k == 1);
}

TEST_CASE("V scheme kind 1 enumerates all four (j,k) pairs") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    const auto combos = enumerate_third_order(model, 1);
    REQUIRE(combos.size() == 4);
    std::set<std::pair<int, int>> got;
    for (const auto& lv : combos) got.insert({lv.j, lv.k});
    CHECK(got == std::set<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}, {2, 2}});
}

TEST_CASE("Xi scheme kind 3 has the single (1,1,2) pathway") {
    const auto model = VibronicModel::xi_scheme(0.4, -0.7);
    const auto combos = enumerate_third_order(model, 3);
    REQUIRE(combos.size() == 1);
    CHECK(combos[0].j == 1);
    CHECK(combos[0].k == 1);
    CHECK(combos[0].l == 2);
}

TEST_CASE("pathway counts follow the manifold sizes") {
    VibronicModel m;
    m.n_levels = 5;
    m.energies = {0.0, 1.0, 1.2, 2.1, 2.3};
    m.manifolds = {Manifold::Ground, Manifold::Single, Manifold::Single, Manifold::Double,
                   Manifold::Double};
    m.modes = {Mode{1.0, {0.0, 0.2, 0.3, 0.4, 0.5}}};
    for (int kind : {1, 2, 4, 5}) CHECK(enumerate_third_order(m, kind).size() == 4);
    for (int kind : {3, 6, 7, 8}) CHECK(enumerate_third_order(m, kind).size() == 8);
}

TEST_CASE("kinds needing a double manifold fail without one") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    for (int kind : {3, 6, 7, 8})
        CHECK_THROWS_AS(enumerate_third_order(model, kind), ModelError);
}

TEST_CASE("electronic prefactor reduces to the constant at zero phase") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7, 1.3, 1.9);
    const ThirdOrderLevels lv{1, 2, -1};
    // kind 2 phase involves only t1 and t3
    const Complex c = electronic_prefactor(model, 2, lv, 0.0, 5.0, 0.0);
    CHECK(std::abs(c - electronic_constant(model, 2, lv)) < 1e-14);
}

TEST_CASE("electronic prefactor phases match the printed exponents") {
    const auto model = VibronicModel::v_scheme(0.3, -0.2, 1.3, 1.9);
    const double t1 = 0.7, t2 = 1.1, t3 = 0.4;
    const double e1 = model.energies[1], e2 = model.energies[2];

    const ThirdOrderLevels lv{1, 2, -1};
    const Complex c5 = electronic_prefactor(model, 5, lv, t1, t2, t3) /
                       electronic_constant(model, 5, lv);
    CHECK(std::abs(c5 - std::polar(1.0, -(e1 * t1 + e2 * t3))) < 1e-14);

    VibronicModel xi = VibronicModel::xi_scheme(0.3, -0.2, 1.3, 2.5);
    const ThirdOrderLevels lvd{1, 1, 2};
    const double el = xi.energies[2];
    const Complex c8 = electronic_prefactor(xi, 8, lvd, t1, t2, t3) /
                       electronic_constant(xi, 8, lvd);
    CHECK(std::abs(c8 - std::polar(1.0, -(e1 * t1 + el * t2 + e1 * t3))) < 1e-14);
}

TEST_CASE("electronic prefactor modulus is time independent") {
    const auto v = VibronicModel::v_scheme(0.3, -0.2, 1.3, 1.9);
    const auto xi = VibronicModel::xi_scheme(0.3, -0.2, 1.3, 2.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> td(0.0, 20.0);
    for (int kind = 1; kind <= 8; ++kind) {
        const auto& model = kind_uses_double(kind) ? xi : v;
        const auto lv = enumerate_third_order(model, kind).front();
        const double ref = std::abs(electronic_prefactor(model, kind, lv, 0, 0, 0));
        for (int i = 0; i < 20; ++i) {
            const double m =
                std::abs(electronic_prefactor(model, kind, lv, td(rng), td(rng), td(rng)));
            CHECK(m == Approx(ref).margin(1e-13));
        }
    }
}

TEST_CASE("model validation rejects broken invariants") {
    auto m = VibronicModel::two_level(0.4);
    SECTION("nonzero ground energy") {
        m.energies[0] = 0.1;
        CHECK_THROWS_AS(m.validate(), ModelError);
    }
    SECTION("nonzero ground displacement") {
        m.modes[0].displacements[0] = 0.2;
        CHECK_THROWS_AS(m.validate(), ModelError);
    }
    SECTION("nonpositive frequency") {
        m.modes[0].omega = 0.0;
        CHECK_THROWS_AS(m.validate(), ModelError);
    }
    SECTION("negative kappa") {
        m.kappa = -0.1;
        CHECK_THROWS_AS(m.validate(), ModelError);
    }
}

TEST_CASE("pathway validation enforces side consistency") {
    const auto model = VibronicModel::v_scheme(0.4, -0.7);
    Pathway p;
    p.interactions = {{Side::Ket, 0, 1}, {Side::Ket, 0, 2}}; // ket is in 1, not 0
    CHECK_THROWS_AS(p.validate(model), PathwayError);

    Pathway ok;
    ok.interactions = {{Side::Ket, 0, 1}, {Side::Bra, 0, 2}, {Side::Ket, 1, 2}};
    CHECK_NOTHROW(ok.validate(model));
    CHECK(ok.ket_levels() == std::vector<int>{1, 1, 2});
    CHECK(ok.bra_levels() == std::vector<int>{0, 2, 2});
}
