#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline double parse_real(const std::string& tok, const std::string& where) {
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ConfigError(where + ": expected a number, got '" + tok + "'");
    return v;
}

inline int parse_index(const std::string& tok, const std::string& where) {
    const double v = parse_real(tok, where);
    const int i = static_cast<int>(v);
    if (v != i || i < 0) throw ConfigError(where + ": expected a nonnegative integer");
    return i;
}

} // namespace detail

/// Parse the line-oriented model schema. Keys: levels, energy, manifold, mode,
/// dipole, kappa, gamma. Errors carry <name>:<line>.
inline VibronicModel parse_model_config(const std::string& text,
                                        const std::string& name = "config") {
    VibronicModel m;
    bool have_levels = false;
    bool any_dipole = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto toks = detail::split_ws(raw);
        if (toks.empty()) continue;
        const std::string where = name + ":" + std::to_string(line_no);
        const std::string& key = toks[0];

        if (key == "levels") {
            if (toks.size() != 2) throw ConfigError(where + ": usage 'levels N'");
            m.n_levels = detail::parse_index(toks[1], where);
            if (m.n_levels < 1) throw ConfigError(where + ": need at least one level");
            m.energies.assign(static_cast<size_t>(m.n_levels), 0.0);
            m.manifolds.assign(static_cast<size_t>(m.n_levels), Manifold::Single);
            m.manifolds[0] = Manifold::Ground;
            have_levels = true;
            continue;
        }
        if (!have_levels)
            throw ConfigError(where + ": 'levels N' must come before '" + key + "'");

        auto check_level = [&](int j) {
            if (j >= m.n_levels)
                throw ConfigError(where + ": level " + std::to_string(j) + " out of range (N=" +
                                  std::to_string(m.n_levels) + ")");
        };

        if (key == "energy") {
            if (toks.size() != 3) throw ConfigError(where + ": usage 'energy <level> <value>'");
            const int j = detail::parse_index(toks[1], where);
            check_level(j);
            const double e = detail::parse_real(toks[2], where);
            if (j == 0 && e != 0.0)
                throw ConfigError(where + ": level 0 energy is fixed to 0");
            m.energies[static_cast<size_t>(j)] = e;
        } else if (key == "manifold") {
            if (toks.size() != 3)
                throw ConfigError(where + ": usage 'manifold <level> ground|single|double'");
            const int j = detail::parse_index(toks[1], where);
            check_level(j);
            Manifold mf;
            if (toks[2] == "ground") mf = Manifold::Ground;
            else if (toks[2] == "single") mf = Manifold::Single;
            else if (toks[2] == "double") mf = Manifold::Double;
            else throw ConfigError(where + ": manifold must be ground, single or double");
            if ((j == 0) != (mf == Manifold::Ground))
                throw ConfigError(where + ": exactly level 0 is the ground manifold");
            m.manifolds[static_cast<size_t>(j)] = mf;
        } else if (key == "mode") {
            if (toks.size() != static_cast<size_t>(m.n_levels) + 2)
                throw ConfigError(where + ": usage 'mode <omega> <z_0> ... <z_" +
                                  std::to_string(m.n_levels - 1) + ">'");
            Mode mode;
            mode.omega = detail::parse_real(toks[1], where);
            if (!(mode.omega > 0.0)) throw ConfigError(where + ": omega must be positive");
            for (int j = 0; j < m.n_levels; ++j)
                mode.displacements.push_back(
                    detail::parse_real(toks[static_cast<size_t>(j) + 2], where));
            if (mode.displacements[0] != 0.0)
                throw ConfigError(where + ": ground-level displacement must be 0");
            m.modes.push_back(std::move(mode));
        } else if (key == "dipole") {
            if (toks.size() != 4 && toks.size() != 5)
                throw ConfigError(where + ": usage 'dipole <j> <k> <re> [im]'");
            const int j = detail::parse_index(toks[1], where);
            const int k = detail::parse_index(toks[2], where);
            check_level(j);
            check_level(k);
            if (!any_dipole) {
                m.dipoles.assign(static_cast<size_t>(m.n_levels),
                                 std::vector<Complex>(static_cast<size_t>(m.n_levels),
                                                      Complex{1.0, 0.0}));
                any_dipole = true;
            }
            const double re = detail::parse_real(toks[3], where);
            const double im = toks.size() == 5 ? detail::parse_real(toks[4], where) : 0.0;
            m.dipoles[static_cast<size_t>(j)][static_cast<size_t>(k)] = Complex{re, im};
            m.dipoles[static_cast<size_t>(k)][static_cast<size_t>(j)] = Complex{re, im};
        } else if (key == "kappa") {
            if (toks.size() != 2)
                throw ConfigError(where + ": kappa takes exactly one value; "
                                          "per-level decay rates are not supported");
            m.kappa = detail::parse_real(toks[1], where);
            if (m.kappa < 0.0) throw ConfigError(where + ": kappa must be nonnegative");
        } else if (key == "gamma") {
            if (toks.size() != 2) throw ConfigError(where + ": usage 'gamma <value>'");
            m.gamma = detail::parse_real(toks[1], where);
            if (m.gamma < 0.0) throw ConfigError(where + ": gamma must be nonnegative");
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    if (!have_levels) throw ConfigError(name + ": missing 'levels N'");
    if (m.modes.empty()) throw ConfigError(name + ": at least one 'mode' line is required");
    try {
        m.validate();
    } catch (const ModelError& e) {
        throw ConfigError(name + ": " + e.what());
    }
    return m;
}

inline VibronicModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_config(buf.str(), path);
}

/// FNV-1a of the raw file bytes, for CSV provenance headers.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

} // namespace vrf
