#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "vrf/spectral.hpp"
#include "vrf/types.hpp"

namespace vrf {

/// One CLI time axis: either a uniform grid "start:step:count" or a fixed value.
struct AxisSpec {
    bool is_grid = false;
    TimeGrid grid;
    double fixed = 0.0;

    int count() const { return is_grid ? grid.count : 1; }
    double at(int i) const { return is_grid ? grid.at(i) : fixed; }
};

inline AxisSpec parse_axis(const std::string& text) {
    AxisSpec ax;
    const auto c1 = text.find(':');
    if (c1 == std::string::npos) {
        try {
            size_t pos = 0;
            ax.fixed = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw ConfigError("bad time value '" + text + "'");
        }
        return ax;
    }
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw ConfigError("bad grid spec '" + text + "', expected start:step:count");
    try {
        ax.grid.start = std::stod(text.substr(0, c1));
        ax.grid.step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        ax.grid.count = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw ConfigError("bad grid spec '" + text + "', expected start:step:count");
    }
    ax.grid.validate();
    ax.is_grid = true;
    return ax;
}

/// Deterministic number formatting for CSV payloads: fixed %.16e.
inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return std::string(buf);
}

/// Gnuplot-friendly CSV: '#' comment headers, comma-separated rows.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& key, const std::string& value) {
        out_ << "# " << key << ": " << value << "\n";
    }
    void columns(const std::vector<std::string>& names) {
        out_ << "# columns:";
        for (const auto& n : names) out_ << " " << n;
        out_ << "\n";
    }
    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ",";
            out_ << fmt(values[i]);
        }
        out_ << "\n";
    }

private:
    std::ostream& out_;
};

} // namespace vrf
