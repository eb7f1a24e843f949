// vrf — vibrational response functions of N-level displaced-oscillator models.
//
// Subcommands: response, spectrum, peaks, verify, explain.
// Exit codes: 0 ok, 2 config/usage error, 3 verification failure.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vrf/bath.hpp"
#include "vrf/config.hpp"
#include "vrf/dsl.hpp"
#include "vrf/exponent.hpp"
#include "vrf/io.hpp"
#include "vrf/spectral.hpp"
#include "vrf/thermal.hpp"
#include "vrf/third_order.hpp"
#include "vrf/verify.hpp"

namespace {

using vrf::Complex;

struct PathwaySelection {
    int kind = 0;                        // 1..8 when a preset/kind is selected
    std::optional<vrf::Pathway> custom;  // DSL pathway otherwise
};

struct CommonOptions {
    std::string config_path;
    std::string preset;
    int kind = 0;
    std::string pathway_file;
    std::string output;
    std::vector<std::string> axis_text = std::vector<std::string>(6);
    double temperature = 0.0;
    double kappa = -1.0; // <0: use config value
    std::string alpha0_text;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_axes) {
    cmd->add_option("--config", o.config_path, "model config file")->required();
    cmd->add_option("--preset", o.preset, "third-order preset (gsb-r, gsb-nr, se-r, se-nr, esa-r, esa-nr, dqc-1, dqc-2)");
    cmd->add_option("--kind", o.kind, "third-order kind number 1..8");
    cmd->add_option("--pathway", o.pathway_file, "pathway DSL file");
    cmd->add_option("-o,--output", o.output, "output CSV file (default stdout)");
    if (with_axes) {
        for (int i = 0; i < 6; ++i)
            cmd->add_option("--t" + std::to_string(i + 1), o.axis_text[static_cast<size_t>(i)],
                            "waiting time t" + std::to_string(i + 1) +
                                ": fixed value or start:step:count");
        cmd->add_option("--temperature", o.temperature,
                        "initial thermal state, units hbar*omega_v/k_B");
        cmd->add_option("--kappa", o.kappa, "vibrational decay rate (overrides config)");
        cmd->add_option("--alpha0", o.alpha0_text,
                        "initial coherent state, 're,im' (first mode)");
    }
}

PathwaySelection select_pathway(const CommonOptions& o, const vrf::VibronicModel& model) {
    const int given = (!o.preset.empty()) + (o.kind != 0) + (!o.pathway_file.empty());
    if (given != 1)
        throw vrf::ConfigError("select exactly one of --preset, --kind, --pathway");
    PathwaySelection sel;
    if (!o.preset.empty()) {
        const auto k = vrf::preset_kind(o.preset);
        if (!k) throw vrf::ConfigError("unknown preset '" + o.preset + "'");
        sel.kind = *k;
    } else if (o.kind != 0) {
        vrf::check_kind(o.kind);
        sel.kind = o.kind;
    } else {
        std::ifstream in(o.pathway_file);
        if (!in) throw vrf::ConfigError(o.pathway_file + ": cannot open");
        std::ostringstream buf;
        buf << in.rdbuf();
        sel.custom = vrf::parse_pathway(buf.str(), model);
    }
    return sel;
}

Complex parse_alpha0(const std::string& text) {
    if (text.empty()) return {};
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw vrf::ConfigError("bad --alpha0 '" + text + "', expected 're,im'");
    }
}

// Response of one third-order kind, summed over pathways, with the optional
// thermal / relaxed / coherent-initialization variants.
Complex kind_response(const vrf::VibronicModel& model, int kind, double t1, double t2,
                      double t3, double temperature, Complex alpha0) {
    Complex sum{0.0, 0.0};
    const double ts[3] = {t1, t2, t3};
    for (const auto& lv : vrf::enumerate_third_order(model, kind)) {
        Complex term = vrf::electronic_prefactor(model, kind, lv, t1, t2, t3);
        for (const auto& md : model.modes) {
            Complex r = (model.kappa > 0.0)
                            ? vrf::relaxed_r_v3(kind, lv, md.displacements, t1, t2, t3,
                                                model.kappa, md.omega)
                            : vrf::r_v3(kind, lv, md.displacements, t1, t2, t3, md.omega);
            if (temperature > 0.0) r = vrf::thermal_scale(r, temperature, md.omega);
            term *= r;
        }
        if (alpha0 != Complex{0.0, 0.0})
            term *= std::polar(
                1.0, vrf::delta_phase(model, vrf::third_order_pathway(kind, lv), ts, alpha0));
        sum += term;
    }
    return sum;
}

// Vibrational response of a custom pathway (all modes).
Complex pathway_response(const vrf::VibronicModel& model, const vrf::ExponentForm& form,
                         const vrf::Pathway& pathway, std::span<const double> ts,
                         double temperature, Complex alpha0) {
    Complex r;
    if (model.kappa > 0.0) r = evaluate_relaxed(form, ts, model.kappa);
    else if (temperature > 0.0) r = thermal_response(form, ts, temperature);
    else r = evaluate(form, ts);
    if (alpha0 != Complex{0.0, 0.0})
        r *= std::polar(1.0, vrf::delta_phase(model, pathway, ts, alpha0));
    return r;
}

struct Axes {
    std::vector<vrf::AxisSpec> axis; // size M
    std::vector<int> grid_axes;      // indices of grid axes
};

Axes resolve_axes(const CommonOptions& o, int order) {
    Axes a;
    for (int i = 0; i < order; ++i) {
        const auto& text = o.axis_text[static_cast<size_t>(i)];
        a.axis.push_back(text.empty() ? vrf::AxisSpec{} : vrf::parse_axis(text));
        if (a.axis.back().is_grid) a.grid_axes.push_back(i);
    }
    for (int i = order; i < 6; ++i)
        if (!o.axis_text[static_cast<size_t>(i)].empty())
            throw vrf::ConfigError("--t" + std::to_string(i + 1) +
                                   " given but the pathway has only " +
                                   std::to_string(order) + " waiting times");
    return a;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw vrf::ConfigError(path + ": cannot open for writing");
    return out;
}

void write_provenance(vrf::CsvWriter& csv, const CommonOptions& o,
                      const vrf::VibronicModel& model, const std::string& what) {
    csv.comment("tool", "vrf " + what);
    csv.comment("config", o.config_path);
    csv.comment("config-hash", vrf::file_hash(o.config_path));
    if (!o.preset.empty()) csv.comment("preset", o.preset);
    if (o.kind != 0) csv.comment("kind", std::to_string(o.kind));
    if (!o.pathway_file.empty()) {
        csv.comment("pathway", o.pathway_file);
        csv.comment("pathway-hash", vrf::file_hash(o.pathway_file));
    }
    csv.comment("kappa", vrf::fmt(model.kappa));
    csv.comment("gamma", vrf::fmt(model.gamma));
}

int cmd_response(const CommonOptions& o) {
    vrf::VibronicModel model = vrf::load_model(o.config_path);
    if (o.kappa >= 0.0) model.kappa = o.kappa;
    if (o.temperature > 0.0 && model.kappa > 0.0)
        throw vrf::ConfigError(
            "temperature and kappa cannot be combined; the thermal scaling is "
            "defined for the coherent (kappa = 0) dynamics only");
    if (o.temperature < 0.0) throw vrf::ConfigError("temperature must be nonnegative");
    const Complex alpha0 = parse_alpha0(o.alpha0_text);
    if (alpha0 != Complex{0.0, 0.0} && model.kappa > 0.0)
        throw vrf::ConfigError("alpha0 initialization requires kappa = 0");
    if (alpha0 != Complex{0.0, 0.0} && o.temperature > 0.0)
        throw vrf::ConfigError("choose either --alpha0 or --temperature");

    const PathwaySelection sel = select_pathway(o, model);
    const int order = sel.custom ? sel.custom->order() : 3;
    const Axes axes = resolve_axes(o, order);

    std::optional<vrf::ExponentForm> form;
    if (sel.custom) form = vrf::build_exponent(model, *sel.custom);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.output.empty()) {
        file = open_output(o.output);
        os = &file;
    }
    vrf::CsvWriter csv(*os);
    write_provenance(csv, o, model, "response");
    if (o.temperature > 0.0) csv.comment("temperature", vrf::fmt(o.temperature));
    if (alpha0 != Complex{0.0, 0.0})
        csv.comment("alpha0", vrf::fmt(alpha0.real()) + "," + vrf::fmt(alpha0.imag()));
    std::vector<std::string> cols;
    for (int i = 0; i < order; ++i) cols.push_back("t" + std::to_string(i + 1));
    cols.push_back("re");
    cols.push_back("im");
    csv.columns(cols);

    // Row-major loop over the grid axes, fixed axes constant.
    std::vector<int> idx(static_cast<size_t>(axes.grid_axes.size()), 0);
    std::vector<double> ts(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) ts[static_cast<size_t>(i)] = axes.axis[static_cast<size_t>(i)].at(0);
    while (true) {
        for (size_t g = 0; g < axes.grid_axes.size(); ++g)
            ts[static_cast<size_t>(axes.grid_axes[g])] =
                axes.axis[static_cast<size_t>(axes.grid_axes[g])].at(idx[g]);
        Complex r;
        if (sel.custom)
            r = pathway_response(model, *form, *sel.custom, ts, o.temperature, alpha0);
        else
            r = kind_response(model, sel.kind, ts[0], ts[1], ts[2], o.temperature, alpha0);
        std::vector<double> row(ts.begin(), ts.end());
        row.push_back(r.real());
        row.push_back(r.imag());
        csv.row(row);
        // advance multi-index, last axis fastest
        size_t g = axes.grid_axes.size();
        while (g > 0) {
            --g;
            if (++idx[g] < axes.axis[static_cast<size_t>(axes.grid_axes[g])].grid.count) break;
            idx[g] = 0;
            if (g == 0) return 0;
        }
        if (axes.grid_axes.empty()) break;
    }
    return 0;
}

int cmd_spectrum(const CommonOptions& o, double gamma_flag) {
    vrf::VibronicModel model = vrf::load_model(o.config_path);
    if (o.kappa >= 0.0) model.kappa = o.kappa;
    if (o.temperature > 0.0 && model.kappa > 0.0)
        throw vrf::ConfigError("temperature and kappa cannot be combined");
    const Complex alpha0 = parse_alpha0(o.alpha0_text);
    const PathwaySelection sel = select_pathway(o, model);
    const int order = sel.custom ? sel.custom->order() : 3;
    const Axes axes = resolve_axes(o, order);
    if (axes.grid_axes.size() != 2)
        throw vrf::ConfigError("spectrum needs exactly two grid axes, e.g. --t1 and --t3");
    const int a1 = axes.grid_axes[0], a3 = axes.grid_axes[1];
    const double gamma = gamma_flag >= 0.0 ? gamma_flag : model.gamma;

    std::optional<vrf::ExponentForm> form;
    if (sel.custom) form = vrf::build_exponent(model, *sel.custom);

    std::vector<double> base(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) base[static_cast<size_t>(i)] = axes.axis[static_cast<size_t>(i)].at(0);
    auto response = [&](double ta, double tb) {
        std::vector<double> ts = base;
        ts[static_cast<size_t>(a1)] = ta;
        ts[static_cast<size_t>(a3)] = tb;
        if (sel.custom)
            return pathway_response(model, *form, *sel.custom, ts, o.temperature, alpha0);
        return kind_response(model, sel.kind, ts[0], ts[1], ts[2], o.temperature, alpha0);
    };
    const vrf::Spectrum2D spec = vrf::spectrum_2d(
        response, axes.axis[static_cast<size_t>(a1)].grid, axes.axis[static_cast<size_t>(a3)].grid, gamma);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.output.empty()) {
        file = open_output(o.output);
        os = &file;
    }
    vrf::CsvWriter csv(*os);
    write_provenance(csv, o, model, "spectrum");
    csv.comment("broadening-gamma", vrf::fmt(gamma));
    csv.comment("axes", "t" + std::to_string(a1 + 1) + ",t" + std::to_string(a3 + 1));
    csv.comment("transform", "e^{+i w t}, trapezoid endpoints, 4x zero padding");
    csv.columns({"omega" + std::to_string(a1 + 1), "omega" + std::to_string(a3 + 1), "re", "im"});
    for (size_t i1 = 0; i1 < spec.omega1.size(); ++i1)
        for (size_t i3 = 0; i3 < spec.omega3.size(); ++i3) {
            const Complex v = spec.at(i1, i3);
            csv.row({spec.omega1[i1], spec.omega3[i3], v.real(), v.imag()});
        }
    return 0;
}

int cmd_peaks(const CommonOptions& o, std::vector<int> kinds, std::vector<int> levels,
              int p1, int p3, int q_max, int p2_max, bool convergence) {
    const vrf::VibronicModel model = vrf::load_model(o.config_path);
    if (kinds.empty() && !o.preset.empty()) {
        const auto k = vrf::preset_kind(o.preset);
        if (!k) throw vrf::ConfigError("unknown preset '" + o.preset + "'");
        kinds.push_back(*k);
    }
    if (kinds.empty() && o.kind != 0) kinds.push_back(o.kind);
    if (kinds.empty()) throw vrf::ConfigError("peaks: give --kinds (or --preset/--kind)");
    for (int k : kinds) vrf::check_kind(k);
    const auto& t2text = o.axis_text[1];
    if (t2text.empty()) throw vrf::ConfigError("peaks: --t2 grid is required");
    const vrf::AxisSpec t2axis = vrf::parse_axis(t2text);
    if (!t2axis.is_grid) throw vrf::ConfigError("peaks: --t2 must be a grid start:step:count");

    vrf::ThirdOrderLevels lv;
    if (!levels.empty()) {
        if (levels.size() < 2 || levels.size() > 3)
            throw vrf::ConfigError("--levels takes j,k or j,k,l");
        lv.j = levels[0];
        lv.k = levels[1];
        lv.l = levels.size() == 3 ? levels[2] : -1;
    } else {
        const auto singles = model.singly_excited();
        if (singles.empty()) throw vrf::ConfigError("model has no singly excited level");
        lv.j = lv.k = singles.front();
        const auto doubles = model.doubly_excited();
        lv.l = doubles.empty() ? -1 : doubles.front();
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!o.output.empty()) {
        file = open_output(o.output);
        os = &file;
    }
    vrf::CsvWriter csv(*os);
    write_provenance(csv, o, model, "peaks");
    csv.comment("p1", std::to_string(p1));
    csv.comment("p3", std::to_string(p3));
    csv.comment("levels",
                std::to_string(lv.j) + "," + std::to_string(lv.k) +
                    (lv.has_double() ? "," + std::to_string(lv.l) : std::string{}));
    csv.comment("q-max", std::to_string(q_max));
    csv.comment("p2-max", std::to_string(p2_max));

    const auto& md = model.modes[0];
    if (convergence) {
        double max_delta = 0.0;
        for (int i = 0; i < t2axis.grid.count; ++i) {
            const double t2 = t2axis.grid.at(i);
            for (int k : kinds) {
                const Complex a = vrf::peak_amplitude(k, lv, md.displacements, p1, p3, t2,
                                                      q_max, p2_max, md.omega);
                const Complex b = vrf::peak_amplitude(k, lv, md.displacements, p1, p3, t2,
                                                      2 * q_max, p2_max, md.omega);
                max_delta = std::max(max_delta, std::abs(a - b));
            }
        }
        csv.comment("convergence-max-delta-qx2", vrf::fmt(max_delta));
    }

    std::vector<std::string> cols = {"t2"};
    for (int k : kinds) {
        cols.push_back("re_kind" + std::to_string(k));
        cols.push_back("im_kind" + std::to_string(k));
    }
    csv.columns(cols);
    for (int i = 0; i < t2axis.grid.count; ++i) {
        const double t2 = t2axis.grid.at(i);
        std::vector<double> row = {t2};
        for (int k : kinds) {
            const Complex a = vrf::peak_amplitude(k, lv, md.displacements, p1, p3, t2, q_max,
                                                  p2_max, md.omega);
            row.push_back(a.real());
            row.push_back(a.imag());
        }
        csv.row(row);
    }
    return 0;
}

int cmd_verify(bool quick, unsigned seed) {
    const auto results = vrf::run_verification(seed, quick);
    bool all = true;
    std::printf("%-60s %-12s %-10s %s\n", "check", "max-error", "tolerance", "status");
    for (const auto& r : results) {
        std::printf("%-60s %-12.3e %-10.1e %s\n", r.name.c_str(), r.max_err, r.tol,
                    r.pass ? "PASS" : "FAIL");
        if (!r.detail.empty()) std::printf("    %s\n", r.detail.c_str());
        all = all && r.pass;
    }
    return all ? 0 : 3;
}

int cmd_explain(const CommonOptions& o, std::vector<int> levels) {
    const vrf::VibronicModel model = vrf::load_model(o.config_path);
    const PathwaySelection sel = select_pathway(o, model);
    vrf::Pathway pathway;
    if (sel.custom) {
        pathway = *sel.custom;
    } else {
        vrf::ThirdOrderLevels lv{1, 1, -1};
        if (!levels.empty()) {
            lv.j = levels[0];
            lv.k = levels.size() > 1 ? levels[1] : levels[0];
            lv.l = levels.size() > 2 ? levels[2] : -1;
        } else {
            const auto combos = vrf::enumerate_third_order(model, sel.kind);
            lv = combos.front();
        }
        pathway = vrf::third_order_pathway(sel.kind, lv);
    }
    const vrf::ExponentForm form = vrf::build_exponent(model, pathway);
    std::printf("pathway: M = %d\n", form.order);
    for (const auto& ia : pathway.interactions)
        std::printf("  %s %d->%d\n", ia.side == vrf::Side::Ket ? "ket" : "bra", ia.from,
                    ia.to);
    std::printf("exponent: %d terms per mode, coeff * (1 - e^{s i w T})\n",
                vrf::terms_per_mode(form));
    for (const auto& t : form.terms) {
        std::string window = "t" + std::to_string(t.first);
        if (t.last != t.first) window += "..t" + std::to_string(t.last);
        std::string decay;
        for (size_t i = 0; i < t.decay.size(); ++i)
            decay += (i ? "," : "") + std::to_string(t.decay[i]);
        std::printf("  mode %d  %-8s s=%+d  %-14s coeff=% .6f  decay=[%s]\n", t.mode,
                    window.c_str(), t.sign, t.label().c_str(), t.coeff, decay.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vibrational response functions for displaced-oscillator models"};
    app.require_subcommand(1);

    CommonOptions ro;
    auto* response = app.add_subcommand("response", "evaluate a response over a time grid");
    add_common(response, ro, true);

    CommonOptions so;
    double gamma_flag = -1.0;
    auto* spectrum = app.add_subcommand("spectrum", "2D spectrum over two time axes");
    add_common(spectrum, so, true);
    spectrum->add_option("--gamma", gamma_flag, "dephasing broadening (default: config)");

    CommonOptions po;
    std::vector<int> kinds, levels;
    int p1 = 0, p3 = 0, q_max = 16, p2_max = 12;
    bool convergence = false;
    auto* peaks = app.add_subcommand("peaks", "peak amplitude trace A_{p1,p3}(t2)");
    add_common(peaks, po, true);
    peaks->add_option("--kinds", kinds, "kinds to tabulate, e.g. 1,2,4,5")->delimiter(',');
    peaks->add_option("--levels", levels, "levels j,k[,l]")->delimiter(',');
    peaks->add_option("--p1", p1, "excitation replica index");
    peaks->add_option("--p3", p3, "detection replica index");
    peaks->add_option("--qmax", q_max, "displacement-order truncation (default 16)");
    peaks->add_option("--p2max", p2_max, "p2 truncation (default 12)");
    peaks->add_flag("--convergence", convergence, "double qmax and report the max change");

    bool quick = false;
    unsigned seed = 20240810;
    auto* verify = app.add_subcommand("verify", "run the Fock-oracle verification suite");
    verify->add_flag("--quick", quick, "smaller draw counts");
    verify->add_option("--seed", seed, "RNG seed for the draws");

    CommonOptions eo;
    std::vector<int> explain_levels;
    auto* explain = app.add_subcommand("explain", "print the exponent term table");
    add_common(explain, eo, false);
    explain->add_option("--levels", explain_levels, "levels j,k[,l]")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (response->parsed()) return cmd_response(ro);
        if (spectrum->parsed()) return cmd_spectrum(so, gamma_flag);
        if (peaks->parsed())
            return cmd_peaks(po, kinds, levels, p1, p3, q_max, p2_max, convergence);
        if (verify->parsed()) return cmd_verify(quick, seed);
        if (explain->parsed()) return cmd_explain(eo, explain_levels);
    } catch (const vrf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
