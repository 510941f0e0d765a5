#pragma once

// Named run descriptions for the figure data sets.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmjcm/cli/config_file.hpp"
#include "tmjcm/dynamics.hpp"

namespace tmjcm::cli {

enum class Observable { inversion, phase1d, phase2d, phase_variances, photon_variances, wigner_origin };

inline const char* to_string(Observable o) noexcept {
    switch (o) {
        case Observable::inversion: return "inversion";
        case Observable::phase1d: return "phase1d";
        case Observable::phase2d: return "phase2d";
        case Observable::phase_variances: return "phase_variances";
        case Observable::photon_variances: return "photon_variances";
        case Observable::wigner_origin: return "wigner_origin";
    }
    return "?";
}

inline bool is_snapshot_observable(Observable o) noexcept {
    return o == Observable::phase1d || o == Observable::phase2d;
}

struct Curve {
    std::string label;
    SystemConfig config;
    std::vector<double> snapshots;  ///< overrides Scenario::snapshots when nonempty
};

struct Scenario {
    std::string name;
    std::string figure;  ///< where the data appear, for `list`
    std::vector<Curve> curves;
    std::optional<Sweep> sweep;
    std::vector<double> snapshots;
    std::vector<Observable> observables;
    std::size_t phase_points = 512;
    std::size_t phase2d_points = 256;
    std::string note;  ///< appended to the run summary

    bool has(Observable o) const {
        return std::find(observables.begin(), observables.end(), o) != observables.end();
    }

    const std::vector<double>& snapshots_for(const Curve& c) const {
        return c.snapshots.empty() ? snapshots : c.snapshots;
    }
};

class UnknownPreset : public std::runtime_error {
public:
    explicit UnknownPreset(const std::string& name) : std::runtime_error("unknown preset '" + name + "'") {}
};

namespace detail {

inline SystemConfig figure_config(int eps1, int eps2, int k1, int k2, double amplitude = 5.0) {
    return make_config({amplitude, eps1}, {amplitude, eps2}, k1, k2, 0.0, 0.0);
}

inline Scenario time_series_preset(std::string name, std::string figure, std::vector<Curve> curves, Sweep sweep,
                                   std::vector<Observable> obs) {
    Scenario s;
    s.name = std::move(name);
    s.figure = std::move(figure);
    s.curves = std::move(curves);
    s.sweep = sweep;
    s.observables = std::move(obs);
    return s;
}

inline Scenario snapshot_preset(std::string name, std::string figure, std::vector<Curve> curves,
                                std::vector<double> times, Observable obs) {
    Scenario s;
    s.name = std::move(name);
    s.figure = std::move(figure);
    s.curves = std::move(curves);
    s.snapshots = std::move(times);
    s.observables = {obs};
    return s;
}

}  // namespace detail

inline const std::vector<Scenario>& presets() {
    static const std::vector<Scenario> registry = [] {
        using detail::figure_config;
        std::vector<Scenario> r;
        const Sweep inversion_sweep{0.0, 20.0, 2001};
        const Sweep variance_sweep{0.0, 30.0, 3001};

        auto fig1a = detail::time_series_preset(
            "fig1a", "Fig. 1(a): inversion, |alpha_j| = 5, excited atom",
            {{"A", figure_config(0, 0, 1, 1), {}}, {"B", figure_config(1, 1, 1, 1), {}}}, inversion_sweep,
            {Observable::inversion, Observable::wigner_origin});
        fig1a.note = "curve B is drawn as sigma_z + 2 in the figure; the CSV holds raw values";
        r.push_back(fig1a);

        auto fig1b = detail::time_series_preset(
            "fig1b", "Fig. 1(b): inversion, |alpha_j| = 5, excited atom",
            {{"A", figure_config(1, 0, 1, 1), {}}, {"B", figure_config(1, 1, 2, 2), {}}}, inversion_sweep,
            {Observable::inversion, Observable::wigner_origin});
        fig1b.note = fig1a.note;
        r.push_back(fig1b);

        r.push_back(detail::snapshot_preset("fig2a", "Fig. 2(a): P(Theta_1), coherent inputs",
                                            {{"coherent", figure_config(0, 0, 1, 1), {}}}, {4.42, 6.2999, 9.32},
                                            Observable::phase1d));

        r.push_back(detail::snapshot_preset(
            "fig2b", "Fig. 2(b): P(Theta_1), even cats; star curve eps = (0, 1) at T = 6.3",
            {{"even_cats", figure_config(1, 1, 1, 1), {}}, {"star", figure_config(0, 1, 1, 1), {6.3}}},
            {1.8, 3.22, 4.4}, Observable::phase1d));

        // With k1 = 0 only mode 2 exchanges photons, so the single-mode cat sits in
        // mode 2 and its distribution is the P2 column; mode 1 stays in vacuum.
        auto fig3 = detail::snapshot_preset("fig3", "Fig. 3: single-mode JCM (k1 = 0, k2 = 1), even cat",
                                            {{"jcm", make_config({0.0, 0}, {5.0, 1}, 0, 1), {}}}, {7.0, 16.4},
                                            Observable::phase1d);
        fig3.note = "the cat field is mode 2 here; read the P2 column";
        r.push_back(fig3);

        auto fig4 = detail::snapshot_preset("fig4", "Fig. 4: joint P(Theta_1, Theta_2), even cats",
                                            {{"even_cats", figure_config(1, 1, 1, 1), {}}}, {1.8, 4.4, 3.22},
                                            Observable::phase2d);
        fig4.note = "full window [-pi, pi)^2; the figure shows the quadrant [0, pi]^2";
        r.push_back(fig4);

        r.push_back(detail::snapshot_preset(
            "fig5", "Fig. 5: P(Theta_1) at T = 5, k = (2, 2)",
            {{"coherent", figure_config(0, 0, 2, 2), {}}, {"even_cats", figure_config(1, 1, 2, 2), {}}}, {5.0},
            Observable::phase1d));

        r.push_back(detail::time_series_preset("fig6a", "Fig. 6(a): phase variance of mode 1, coherent inputs",
                                               {{"coherent", figure_config(0, 0, 1, 1), {}}}, variance_sweep,
                                               {Observable::phase_variances}));
        r.push_back(detail::time_series_preset("fig6b", "Fig. 6(b): phase variance of mode 1, even cats",
                                               {{"even_cats", figure_config(1, 1, 1, 1), {}}}, variance_sweep,
                                               {Observable::phase_variances}));

        const Sweep periodic_sweep{0.0, 8.0, 4001};
        r.push_back(detail::time_series_preset("fig7a", "Fig. 7(a): phase variance of mode 1, k = (2, 2)",
                                               {{"even_cats", figure_config(1, 1, 2, 2), {}}}, periodic_sweep,
                                               {Observable::phase_variances}));
        r.push_back(detail::time_series_preset("fig7b", "Fig. 7(b): phase variance of mode 1, k = (1, 2)",
                                               {{"even_cats", figure_config(1, 1, 1, 2), {}}}, periodic_sweep,
                                               {Observable::phase_variances}));

        const char* fig8_parts[] = {"(a): single-mode photon variance", "(b): sum-mode photon variance",
                                    "(c): difference-mode photon variance"};
        const char* fig8_names[] = {"fig8a", "fig8b", "fig8c"};
        for (int i = 0; i < 3; ++i) {
            r.push_back(detail::time_series_preset(fig8_names[i], std::string("Fig. 8") + fig8_parts[i],
                                                   {{"even_cats", figure_config(1, 1, 1, 1), {}}}, variance_sweep,
                                                   {Observable::photon_variances}));
        }
        return r;
    }();
    return registry;
}

inline const Scenario& find_preset(const std::string& name) {
    for (const auto& s : presets())
        if (s.name == name) return s;
    throw UnknownPreset(name);
}

/// Single-curve scenario from a config file: every time-series observable over
/// the sweep, plus P(Theta_j) at any requested snapshots.
inline Scenario scenario_from_config(const RunConfig& rc, std::string name = "config") {
    Scenario s;
    s.name = std::move(name);
    s.figure = "user configuration";
    s.curves = {{"config", rc.system, {}}};
    s.sweep = rc.sweep;
    s.observables = {Observable::inversion, Observable::phase_variances, Observable::photon_variances,
                     Observable::wigner_origin};
    return s;
}

/// The run description of one curve as a config file. Snapshot-only presets
/// carry the default sweep.
inline RunConfig curve_config(const Scenario& s, const Curve& c) {
    return {c.config, s.sweep.value_or(Sweep{})};
}

}  // namespace tmjcm::cli
