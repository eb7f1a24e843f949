#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vrf/model.hpp"
#include "vrf/types.hpp"

namespace vrf {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline int parse_level(std::string_view tok, int line_no) {
    int value = 0;
    bool any = false;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw PathwayError("pathway line " + std::to_string(line_no) +
                               ": unknown level name '" + std::string(tok) + "'");
        value = value * 10 + (ch - '0');
        any = true;
    }
    if (!any)
        throw PathwayError("pathway line " + std::to_string(line_no) + ": missing level");
    return value;
}

} // namespace detail

/// Parse the line-oriented pathway DSL. Two equivalent line forms:
///   ket 0->2          bra 1->0
///   side=ket from=0 to=2
/// '#' starts a comment; blank lines are skipped. Validation against the
/// model happens via Pathway::validate.
inline Pathway parse_pathway(std::string_view text, const VibronicModel& model) {
    Pathway p;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = detail::trim(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;

        Interaction ia;
        if (line.find('=') != std::string_view::npos) {
            // key=value form
            std::istringstream ls{std::string(line)};
            std::string kv;
            bool have_side = false, have_from = false, have_to = false;
            while (ls >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw PathwayError("pathway line " + std::to_string(line_no) +
                                       ": expected key=value, got '" + kv + "'");
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                if (key == "side") {
                    if (val == "ket") ia.side = Side::Ket;
                    else if (val == "bra") ia.side = Side::Bra;
                    else
                        throw PathwayError("pathway line " + std::to_string(line_no) +
                                           ": side must be ket or bra");
                    have_side = true;
                } else if (key == "from") {
                    ia.from = detail::parse_level(val, line_no);
                    have_from = true;
                } else if (key == "to") {
                    ia.to = detail::parse_level(val, line_no);
                    have_to = true;
                } else {
                    throw PathwayError("pathway line " + std::to_string(line_no) +
                                       ": unknown key '" + key + "'");
                }
            }
            if (!have_side || !have_from || !have_to)
                throw PathwayError("pathway line " + std::to_string(line_no) +
                                   ": need side=, from= and to=");
        } else {
            // "ket A->B" form
            const auto sp = line.find(' ');
            if (sp == std::string_view::npos)
                throw PathwayError("pathway line " + std::to_string(line_no) +
                                   ": expected '<side> <from>-><to>'");
            const std::string_view side = line.substr(0, sp);
            if (side == "ket") ia.side = Side::Ket;
            else if (side == "bra") ia.side = Side::Bra;
            else
                throw PathwayError("pathway line " + std::to_string(line_no) +
                                   ": side must be ket or bra, got '" + std::string(side) + "'");
            std::string_view rest = detail::trim(line.substr(sp + 1));
            const auto arrow = rest.find("->");
            if (arrow == std::string_view::npos)
                throw PathwayError("pathway line " + std::to_string(line_no) +
                                   ": missing '->' in transition");
            ia.from = detail::parse_level(detail::trim(rest.substr(0, arrow)), line_no);
            ia.to = detail::parse_level(detail::trim(rest.substr(arrow + 2)), line_no);
        }
        p.interactions.push_back(ia);
    }
    p.validate(model);
    return p;
}

/// Named third-order presets, kind numbering as in the response-function tables.
inline const std::map<std::string, int>& pathway_presets() {
    static const std::map<std::string, int> presets = {
        {"se-r", 1},  {"gsb-r", 2},  {"esa-r", 3},  {"se-nr", 4},
        {"gsb-nr", 5}, {"esa-nr", 6}, {"dqc-1", 7},  {"dqc-2", 8},
    };
    return presets;
}

inline std::optional<int> preset_kind(std::string_view name) {
    const auto& m = pathway_presets();
    const auto it = m.find(std::string(name));
    if (it == m.end()) return std::nullopt;
    return it->second;
}

} // namespace vrf
