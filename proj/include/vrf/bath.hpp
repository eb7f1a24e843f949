#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vrf/thermal.hpp"
#include "vrf/types.hpp"

namespace vrf {

/// Displacement density s(omega) of a phonon bath: a tabulated curve, the
/// parametric ohmic family eta * omega * e^{-omega/omega_c}, or discrete lines
/// (delta peaks), which reproduce single strong modes.
struct SpectralDensity {
    enum class Kind { Tabulated, Ohmic, Lines };

    Kind kind = Kind::Lines;
    std::vector<std::pair<double, double>> table; // (omega_i, s_i) or (omega_i, weight_i)
    double eta = 0.0;
    double omega_c = 1.0;

    static SpectralDensity ohmic(double eta_, double omega_c_) {
        SpectralDensity sd;
        sd.kind = Kind::Ohmic;
        sd.eta = eta_;
        sd.omega_c = omega_c_;
        return sd;
    }
    static SpectralDensity lines(std::vector<std::pair<double, double>> pts) {
        SpectralDensity sd;
        sd.kind = Kind::Lines;
        sd.table = std::move(pts);
        return sd;
    }
    static SpectralDensity tabulated(std::vector<std::pair<double, double>> pts) {
        SpectralDensity sd;
        sd.kind = Kind::Tabulated;
        sd.table = std::move(pts);
        return sd;
    }

    void validate(double temperature) const {
        if (kind == Kind::Ohmic) {
            if (eta < 0.0 || !(omega_c > 0.0))
                throw NumericsError("ohmic density needs eta >= 0 and omega_c > 0");
            return;
        }
        if (table.empty()) throw NumericsError("empty spectral density table");
        double prev = 0.0;
        for (const auto& [w, s] : table) {
            if (!(w > prev)) throw NumericsError("density frequencies must be strictly increasing and positive");
            prev = w;
            (void)s;
        }
        if (kind == Kind::Tabulated && temperature > 0.0 && table.size() >= 2) {
            // coth ~ 2T/omega near 0: require s(omega)/omega bounded, estimated
            // from the power law of the first two nodes.
            const double w0 = table[0].first, s0 = std::abs(table[0].second);
            const double w1 = table[1].first, s1 = std::abs(table[1].second);
            if (s0 > 0.0 && s1 > 0.0) {
                const double slope = std::log(s1 / s0) / std::log(w1 / w0);
                if (slope < 1.0 - 1e-9 && s0 / w0 > 1e3 * s1 / w1)
                    throw NumericsError(
                        "density does not vanish fast enough at omega -> 0 for T > 0");
            }
        }
    }
};

namespace detail {

// Gauss(7)/Kronrod(15) nodes and weights on [-1, 1].
inline const std::array<double, 15>& gk_nodes() {
    static const std::array<double, 15> x = {
        -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
        -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
        0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
        0.864864423359769,  0.949107912342759,  0.991455371120813};
    return x;
}
inline const std::array<double, 15>& gk_weights() {
    static const std::array<double, 15> w = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
        0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
        0.104790010322250, 0.063092092629979, 0.022935322010529};
    return w;
}
inline const std::array<double, 4>& gauss7_weights() {
    // weights of the embedded 7-point Gauss rule (symmetric; nodes 1,3,5,7 of kronrod)
    static const std::array<double, 4> w = {0.129484966168870, 0.279705391489277,
                                            0.381830050505119, 0.417959183673469};
    return w;
}

template <typename F>
std::pair<Complex, double> gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex kronrod{0.0, 0.0};
    Complex gauss{0.0, 0.0};
    const auto& xs = gk_nodes();
    const auto& ws = gk_weights();
    std::array<Complex, 15> vals;
    for (size_t i = 0; i < 15; ++i) {
        vals[i] = f(mid + half * xs[i]);
        kronrod += ws[i] * vals[i];
    }
    const auto& gw = gauss7_weights();
    gauss = gw[3] * vals[7];
    gauss += gw[0] * (vals[1] + vals[13]);
    gauss += gw[1] * (vals[3] + vals[11]);
    gauss += gw[2] * (vals[5] + vals[9]);
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

template <typename F>
Complex adaptive_gk(const F& f, double a, double b, double abs_tol, int depth = 0) {
    const auto [val, err] = gk15(f, a, b);
    if (err <= abs_tol || depth >= 40) return val;
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, 0.5 * abs_tol, depth + 1) +
           adaptive_gk(f, mid, b, 0.5 * abs_tol, depth + 1);
}

} // namespace detail

/// Line-shape integrand value s(w) * {coth(w/2T)[1-cos(wt)] + i sin(wt)} summed
/// or integrated over the density. g(0) = 0 and Re g >= 0 for s >= 0.
inline Complex lineshape_g(const SpectralDensity& sd, double t, double temperature,
                           double abs_tol = 1e-10) {
    sd.validate(temperature);
    auto kernel = [&](double w, double s) {
        const double coth = coth_factor(temperature, w);
        return s * Complex{coth * (1.0 - std::cos(w * t)), std::sin(w * t)};
    };
    switch (sd.kind) {
        case SpectralDensity::Kind::Lines: {
            Complex g{0.0, 0.0};
            for (const auto& [w, weight] : sd.table) g += kernel(w, weight);
            return g;
        }
        case SpectralDensity::Kind::Tabulated: {
            // trapezoid over the tabulated nodes; the table is the definition
            Complex g{0.0, 0.0};
            for (size_t i = 0; i + 1 < sd.table.size(); ++i) {
                const auto& [w0, s0] = sd.table[i];
                const auto& [w1, s1] = sd.table[i + 1];
                g += 0.5 * (w1 - w0) * (kernel(w0, s0) + kernel(w1, s1));
            }
            return g;
        }
        case SpectralDensity::Kind::Ohmic: {
            auto f = [&](double w) { return kernel(w, sd.eta * w * std::exp(-w / sd.omega_c)); };
            // Log-spaced panels: fine near 0 where coth peaks, then dyadic out
            // to where the exponential cutoff has died off.
            const double w_hi =
                sd.omega_c * std::max(50.0, 50.0 + 2.0 * std::log1p(std::abs(sd.eta)));
            Complex g{0.0, 0.0};
            double lo = 0.0, hi = std::min(sd.omega_c / 16.0, w_hi);
            while (lo < w_hi) {
                g += detail::adaptive_gk(f, lo, hi, abs_tol / 8.0);
                lo = hi;
                hi = std::min(2.0 * hi, w_hi);
                if (hi <= lo) break;
            }
            return g;
        }
    }
    return {};
}

/// Parse a density specification: either a named parametric family like
/// "ohmic:0.8,1.3" (eta, omega_c) or the path of a two-column text table of
/// (omega, s) rows; '#' comments allowed.
inline SpectralDensity parse_spectral_density(const std::string& spec) {
    if (spec.rfind("ohmic:", 0) == 0) {
        const auto body = spec.substr(6);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw ConfigError("ohmic density needs 'ohmic:<eta>,<omega_c>'");
        try {
            return SpectralDensity::ohmic(std::stod(body.substr(0, comma)),
                                          std::stod(body.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad ohmic parameters in '" + spec + "'");
        }
    }
    std::ifstream in(spec);
    if (!in) throw ConfigError(spec + ": cannot open density table");
    std::vector<std::pair<double, double>> pts;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        double w, s;
        if (!(ls >> w)) continue;
        if (!(ls >> s))
            throw ConfigError(spec + ":" + std::to_string(line_no) +
                              ": expected two columns (omega, s)");
        pts.push_back({w, s});
    }
    if (pts.empty()) throw ConfigError(spec + ": empty density table");
    return SpectralDensity::tabulated(std::move(pts));
}

/// Transition pair (a -> b), the label of a displacement difference z_ab.
struct PairLabel {
    int a = 0;
    int b = 0;
    friend bool operator<(const PairLabel& x, const PairLabel& y) {
        return std::pair{x.a, x.b} < std::pair{y.a, y.b};
    }
    friend bool operator==(const PairLabel& x, const PairLabel& y) {
        return x.a == y.a && x.b == y.b;
    }
};

/// Densities s_{jk,j'k'}(omega), indexed by two transition pairs. Lookup is
/// symmetric in the order of the two pairs.
class BathDensities {
public:
    void set(PairLabel p, PairLabel q, SpectralDensity sd) {
        map_[key(p, q)] = std::move(sd);
    }
    const SpectralDensity& get(PairLabel p, PairLabel q) const {
        const auto it = map_.find(key(p, q));
        if (it == map_.end())
            throw NumericsError("missing spectral density for pair (" + to_string(p) + "," +
                                to_string(q) + ")");
        return it->second;
    }
    bool has(PairLabel p, PairLabel q) const { return map_.count(key(p, q)) > 0; }

private:
    static std::string to_string(PairLabel p) {
        return std::to_string(p.a) + "->" + std::to_string(p.b);
    }
    static std::array<int, 4> key(PairLabel p, PairLabel q) {
        std::array<int, 4> a{p.a, p.b, q.a, q.b};
        std::array<int, 4> b{q.a, q.b, p.a, p.b};
        return std::min(a, b);
    }
    std::map<std::array<int, 4>, SpectralDensity> map_;
};

/// Bath for which z_ab z_cd collapses to the model's single-mode products:
/// s_{ab,cd} = (z_a - z_b)(z_c - z_d) * delta(omega - omega_v). Used by the
/// delta-collapse checks.
inline SpectralDensity delta_density_from_model(const VibronicModel& model, PairLabel p,
                                                PairLabel q, int mode = 0) {
    const auto& md = model.modes[static_cast<size_t>(mode)];
    const auto& z = md.displacements;
    const double weight = (z[static_cast<size_t>(p.a)] - z[static_cast<size_t>(p.b)]) *
                          (z[static_cast<size_t>(q.a)] - z[static_cast<size_t>(q.b)]);
    return SpectralDensity::lines({{md.omega, weight}});
}

namespace detail {

// Window/pair tables of the third-order bath exponents f_{T;p}. Windows in
// the order t1, t2, t3, t12, t23, t13; `conj` marks the g^* entries.
struct BathEntry {
    PairLabel p, q;
    bool conj;
};

inline std::array<BathEntry, 6> bath_table(int kind, int j, int k, int l) {
    switch (kind) {
        case 1:
            return {{{{0, j}, {k, 0}, true},
                     {{j, 0}, {k, 0}, false},
                     {{0, j}, {k, 0}, true},
                     {{0, j}, {j, 0}, true},
                     {{k, 0}, {0, k}, false},
                     {{0, j}, {0, k}, true}}};
        case 2:
            return {{{{0, j}, {j, 0}, true},
                     {{j, 0}, {k, 0}, true},
                     {{0, k}, {k, 0}, false},
                     {{0, j}, {k, 0}, true},
                     {{j, 0}, {0, k}, true},
                     {{0, j}, {0, k}, true}}};
        case 3:
            return {{{{0, j}, {k, 0}, true},
                     {{k, 0}, {l, k}, false},
                     {{l, k}, {j, l}, false},
                     {{j, 0}, {k, l}, true},
                     {{0, k}, {l, j}, false},
                     {{j, 0}, {l, j}, true}}};
        case 4:
            return {{{{0, j}, {k, 0}, false},
                     {{0, k}, {k, 0}, true},
                     {{0, j}, {k, 0}, true},
                     {{j, 0}, {k, 0}, false},
                     {{j, 0}, {k, 0}, true},
                     {{0, j}, {j, 0}, false}}};
        case 5:
            return {{{{0, j}, {j, 0}, false},
                     {{0, j}, {k, 0}, false},
                     {{0, k}, {k, 0}, false},
                     {{j, 0}, {k, 0}, false},
                     {{j, 0}, {k, 0}, false},
                     {{0, j}, {k, 0}, false}}};
        case 6:
            return {{{{0, j}, {k, 0}, false},
                     {{0, k}, {l, j}, true},
                     {{l, k}, {j, l}, false},
                     {{j, 0}, {l, j}, false},
                     {{k, 0}, {l, k}, true},
                     {{0, j}, {l, k}, false}}};
        case 7:
            return {{{{j, 0}, {l, j}, false},
                     {{0, k}, {l, j}, false},
                     {{0, k}, {k, l}, true},
                     {{0, j}, {k, 0}, false},
                     {{j, l}, {l, k}, false},
                     {{0, j}, {l, k}, false}}};
        case 8:
            return {{{{0, j}, {j, l}, false},
                     {{k, l}, {l, j}, false},
                     {{0, k}, {k, l}, false},
                     {{0, j}, {l, k}, false},
                     {{0, k}, {l, j}, false},
                     {{0, j}, {k, 0}, false}}};
    }
    throw PathwayError("third-order kind must be 1..8");
}

} // namespace detail

/// Bath exponent f_{T;p,jk(l)}: six line-shape terms over the windows
/// t1, t2, t3, t12, t23, t13 with per-kind pair labels and conjugations.
/// The response is exp of the returned value.
inline Complex third_order_bath_exponent(int kind, const ThirdOrderLevels& lv,
                                         const BathDensities& bath, double t1, double t2,
                                         double t3, double temperature,
                                         double abs_tol = 1e-10) {
    check_kind(kind);
    if (kind_uses_double(kind) && !lv.has_double())
        throw PathwayError("kinds 3,6,7,8 require a doubly excited level");
    const auto table = detail::bath_table(kind, lv.j, lv.k, lv.l);
    const std::array<double, 6> windows = {t1, t2, t3, t1 + t2, t2 + t3, t1 + t2 + t3};
    Complex f{0.0, 0.0};
    for (size_t w = 0; w < 6; ++w) {
        const auto& e = table[w];
        Complex g = lineshape_g(bath.get(e.p, e.q), windows[w], temperature, abs_tol);
        f += e.conj ? std::conj(g) : g;
    }
    return f;
}

} // namespace vrf
