#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vrf/types.hpp"

namespace vrf {

enum class Manifold { Ground, Single, Double };

/// One vibrational mode: frequency and per-level displacements z_{j,xi}.
struct Mode {
    double omega = 1.0;
    std::vector<double> displacements; // one per electronic level, z_0 = 0
};

/// N-level system with linearly displaced harmonic modes.
///
/// Units: hbar = 1, energies and rates in units of the first mode frequency.
/// Level 0 is the electronic ground state with energy 0 and zero displacement.
struct VibronicModel {
    int n_levels = 0;
    std::vector<double> energies;            // eps_j, eps_0 = 0
    std::vector<Manifold> manifolds;         // per level
    std::vector<Mode> modes;                 // B >= 1
    std::vector<std::vector<Complex>> dipoles; // N x N, defaults to all-ones
    double kappa = 0.0;                      // vibrational decay rate, shared
    double gamma = 0.0;                      // electronic dephasing (spectra only)

    int n_modes() const { return static_cast<int>(modes.size()); }

    Complex dipole(int j, int k) const {
        if (dipoles.empty()) return Complex{1.0, 0.0};
        return dipoles[static_cast<size_t>(j)][static_cast<size_t>(k)];
    }

    std::vector<int> singly_excited() const {
        std::vector<int> out;
        for (int j = 0; j < n_levels; ++j)
            if (manifolds[static_cast<size_t>(j)] == Manifold::Single) out.push_back(j);
        return out;
    }

    std::vector<int> doubly_excited() const {
        std::vector<int> out;
        for (int j = 0; j < n_levels; ++j)
            if (manifolds[static_cast<size_t>(j)] == Manifold::Double) out.push_back(j);
        return out;
    }

    void validate() const {
        if (n_levels < 1) throw ModelError("model must have at least one level");
        if (energies.size() != static_cast<size_t>(n_levels))
            throw ModelError("energies list does not match level count");
        if (manifolds.size() != static_cast<size_t>(n_levels))
            throw ModelError("manifold tags do not match level count");
        if (energies[0] != 0.0)
            throw ModelError("level 0 must have energy 0");
        if (manifolds[0] != Manifold::Ground)
            throw ModelError("level 0 must be tagged ground");
        if (modes.empty()) throw ModelError("model must declare at least one mode");
        for (const auto& m : modes) {
            if (!(m.omega > 0.0)) throw ModelError("mode frequency must be positive");
            if (m.displacements.size() != static_cast<size_t>(n_levels))
                throw ModelError("mode displacement count does not match level count");
            if (m.displacements[0] != 0.0)
                throw ModelError("ground-level displacement must be 0");
        }
        if (!dipoles.empty()) {
            if (dipoles.size() != static_cast<size_t>(n_levels))
                throw ModelError("dipole matrix must be N x N");
            for (const auto& row : dipoles)
                if (row.size() != static_cast<size_t>(n_levels))
                    throw ModelError("dipole matrix must be N x N");
        }
        if (kappa < 0.0) throw ModelError("kappa must be nonnegative");
        if (gamma < 0.0) throw ModelError("gamma must be nonnegative");
    }

    /// Two-level system, single mode. Handy for tests and the textbook limit.
    static VibronicModel two_level(double z1, double eps1 = 1.0, double omega = 1.0) {
        VibronicModel m;
        m.n_levels = 2;
        m.energies = {0.0, eps1};
        m.manifolds = {Manifold::Ground, Manifold::Single};
        m.modes = {Mode{omega, {0.0, z1}}};
        return m;
    }

    /// Three-level V scheme: two singly excited levels.
    static VibronicModel v_scheme(double z1, double z2, double eps1 = 1.0,
                                  double eps2 = 1.5, double omega = 1.0) {
        VibronicModel m;
        m.n_levels = 3;
        m.energies = {0.0, eps1, eps2};
        m.manifolds = {Manifold::Ground, Manifold::Single, Manifold::Single};
        m.modes = {Mode{omega, {0.0, z1, z2}}};
        return m;
    }

    /// Three-level Xi (ladder) scheme: one single, one double.
    static VibronicModel xi_scheme(double z1, double z2, double eps1 = 1.0,
                                   double eps2 = 2.2, double omega = 1.0) {
        VibronicModel m;
        m.n_levels = 3;
        m.energies = {0.0, eps1, eps2};
        m.manifolds = {Manifold::Ground, Manifold::Single, Manifold::Double};
        m.modes = {Mode{omega, {0.0, z1, z2}}};
        return m;
    }
};

enum class Side { Ket, Bra };

struct Interaction {
    Side side = Side::Ket;
    int from = 0;
    int to = 0;
};

/// A double-sided Feynman pathway: M interactions in time order, interaction i
/// acting at the start of waiting time t_i. Emission closes the diagram after t_M.
struct Pathway {
    std::vector<Interaction> interactions;

    int order() const { return static_cast<int>(interactions.size()); }

    /// Electronic ket level during each waiting time (index 0 <-> t_1).
    std::vector<int> ket_levels() const { return side_levels(Side::Ket); }
    /// Electronic bra level during each waiting time.
    std::vector<int> bra_levels() const { return side_levels(Side::Bra); }

    /// Enforce the pathway invariants against a model.
    void validate(const VibronicModel& model) const {
        if (interactions.empty()) throw PathwayError("pathway has no interactions");
        int ket = 0, bra = 0;
        for (size_t i = 0; i < interactions.size(); ++i) {
            const auto& ia = interactions[i];
            if (ia.from < 0 || ia.from >= model.n_levels || ia.to < 0 ||
                ia.to >= model.n_levels)
                throw PathwayError("interaction " + std::to_string(i + 1) +
                                   ": level index out of range");
            if (ia.from == ia.to)
                throw PathwayError("interaction " + std::to_string(i + 1) +
                                   ": transition must change the electronic level");
            int& cur = (ia.side == Side::Ket) ? ket : bra;
            if (ia.from != cur)
                throw PathwayError("interaction " + std::to_string(i + 1) + ": departs from level " +
                                   std::to_string(ia.from) + " but the " +
                                   (ia.side == Side::Ket ? "ket" : "bra") + " is in level " +
                                   std::to_string(cur));
            cur = ia.to;
        }
    }

private:
    std::vector<int> side_levels(Side s) const {
        std::vector<int> out(interactions.size());
        int cur = 0;
        for (size_t i = 0; i < interactions.size(); ++i) {
            if (interactions[i].side == s) cur = interactions[i].to;
            out[i] = cur;
        }
        return out;
    }
};

/// Levels (j,k[,l]) selecting one third-order pathway of a given kind.
struct ThirdOrderLevels {
    int j = 1;
    int k = 1;
    int l = -1; // unused for kinds 1,2,4,5

    bool has_double() const { return l >= 0; }
};

inline bool kind_uses_double(int kind) {
    return kind == 3 || kind == 6 || kind == 7 || kind == 8;
}

inline void check_kind(int kind) {
    if (kind < 1 || kind > 8) throw PathwayError("third-order kind must be 1..8");
}

/// The canonical interaction list for third-order kind p with levels (j,k[,l]).
/// Kinds follow the standard grouping: 1/4 stimulated emission, 2/5 ground-state
/// bleaching, 3/6 excited-state absorption, 7/8 double quantum coherence.
inline Pathway third_order_pathway(int kind, const ThirdOrderLevels& lv) {
    check_kind(kind);
    const int j = lv.j, k = lv.k, l = lv.l;
    if (kind_uses_double(kind) && l < 0)
        throw PathwayError("kinds 3,6,7,8 require a doubly excited level");
    Pathway p;
    switch (kind) {
        case 1: p.interactions = {{Side::Bra, 0, j}, {Side::Ket, 0, k}, {Side::Bra, j, 0}}; break;
        case 2: p.interactions = {{Side::Bra, 0, j}, {Side::Bra, j, 0}, {Side::Ket, 0, k}}; break;
        case 3: p.interactions = {{Side::Bra, 0, j}, {Side::Ket, 0, k}, {Side::Ket, k, l}}; break;
        case 4: p.interactions = {{Side::Ket, 0, j}, {Side::Bra, 0, k}, {Side::Bra, k, 0}}; break;
        case 5: p.interactions = {{Side::Ket, 0, j}, {Side::Ket, j, 0}, {Side::Ket, 0, k}}; break;
        case 6: p.interactions = {{Side::Ket, 0, j}, {Side::Bra, 0, k}, {Side::Ket, j, l}}; break;
        case 7: p.interactions = {{Side::Ket, 0, j}, {Side::Ket, j, l}, {Side::Bra, 0, k}}; break;
        case 8: p.interactions = {{Side::Ket, 0, j}, {Side::Ket, j, l}, {Side::Ket, l, k}}; break;
    }
    return p;
}

/// All level combinations contributing to kind p: (j,k) over singles for
/// kinds 1,2,4,5 and (j,k,l) with l over doubles for kinds 3,6,7,8.
inline std::vector<ThirdOrderLevels> enumerate_third_order(const VibronicModel& model,
                                                           int kind) {
    check_kind(kind);
    model.validate();
    const auto singles = model.singly_excited();
    std::vector<ThirdOrderLevels> out;
    if (!kind_uses_double(kind)) {
        for (int j : singles)
            for (int k : singles) out.push_back({j, k, -1});
        return out;
    }
    const auto doubles = model.doubly_excited();
    if (doubles.empty())
        throw ModelError("kind " + std::to_string(kind) +
                         " requires a doubly excited manifold, but none is declared");
    for (int j : singles)
        for (int k : singles)
            for (int l : doubles) out.push_back({j, k, l});
    return out;
}

/// Dipole constant C_{p,jk(l)} entering the electronic prefactor, hbar = 1.
inline Complex electronic_constant(const VibronicModel& model, int kind,
                                   const ThirdOrderLevels& lv) {
    check_kind(kind);
    const Complex i3{0.0, -1.0}; // (i)^3 = -i
    const int j = lv.j, k = lv.k, l = lv.l;
    auto mu = [&](int a, int b) { return model.dipole(a, b); };
    switch (kind) {
        case 1:
        case 2:
        case 4:
        case 5: return i3 * std::norm(mu(0, j)) * std::norm(mu(0, k));
        case 3: return -i3 * std::norm(mu(0, j)) * mu(k, 0) * mu(l, k);
        case 6:
        case 7: return -i3 * std::norm(mu(0, k)) * mu(j, 0) * mu(l, j);
        case 8: return i3 * mu(j, 0) * mu(l, j) * mu(l, k) * mu(k, 0);
    }
    return {};
}

/// Full electronic factor C * exp(-i sum_i (eps_ket,i - eps_bra,i) t_i).
inline Complex electronic_prefactor(const VibronicModel& model, int kind,
                                    const ThirdOrderLevels& lv, double t1, double t2,
                                    double t3) {
    const Pathway p = third_order_pathway(kind, lv);
    const auto ks = p.ket_levels();
    const auto bs = p.bra_levels();
    const double ts[3] = {t1, t2, t3};
    double phase = 0.0;
    for (int i = 0; i < 3; ++i)
        phase -= (model.energies[static_cast<size_t>(ks[static_cast<size_t>(i)])] -
                  model.energies[static_cast<size_t>(bs[static_cast<size_t>(i)])]) *
                 ts[i];
    return electronic_constant(model, kind, lv) * std::polar(1.0, phase);
}

} // namespace vrf
