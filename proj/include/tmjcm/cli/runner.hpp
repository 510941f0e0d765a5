#pragma once

// Scenario execution: observables -> CSV files in an output directory, plus a
// one-line summary per file.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmjcm/analysis.hpp"
#include "tmjcm/cli/csv.hpp"
#include "tmjcm/cli/scenario.hpp"
#include "tmjcm/dynamics.hpp"
#include "tmjcm/phase.hpp"
#include "tmjcm/wigner.hpp"

namespace tmjcm::cli {

class OutputDirError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::optional<std::vector<double>> snapshots;  ///< replaces the preset's snapshot list
    bool gnuplot = false;
};

struct FileSummary {
    std::string file;
    std::size_t rows = 0;
    std::string stats;

    std::string line() const { return file + ": " + std::to_string(rows) + " rows; " + stats; }
};

struct RunResult {
    std::vector<FileSummary> files;
    std::vector<std::string> notes;
};

namespace detail {

class ColumnStats {
public:
    void add(const std::string& column, double v) {
        auto& s = stats_[order(column)];
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        s.sum += v;
        ++s.count;
    }

    std::string describe() const {
        std::string out;
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& s = stats_.at(i);
            if (!out.empty()) out += "; ";
            out += names_[i] + " min " + format_number(s.min) + " max " + format_number(s.max) + " mean " +
                   format_number(s.sum / static_cast<double>(s.count));
        }
        return out;
    }

private:
    struct Acc {
        double min = std::numeric_limits<double>::infinity();
        double max = -std::numeric_limits<double>::infinity();
        double sum = 0.0;
        std::size_t count = 0;
    };

    std::size_t order(const std::string& column) {
        const auto it = std::find(names_.begin(), names_.end(), column);
        if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
        names_.push_back(column);
        return names_.size() - 1;
    }

    std::vector<std::string> names_;
    std::map<std::size_t, Acc> stats_;
};

inline void prepare_output_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw OutputDirError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
    }
    const auto probe = dir / ".write_probe";
    {
        std::ofstream out(probe, std::ios::binary);
        if (!out || !(out << "x") || !out.flush()) throw OutputDirError("output directory " + dir.string() + " is not writable");
    }
    std::filesystem::remove(probe, ec);
}

inline std::string time_tag(double T) { return "T" + format_shortest(T); }

inline std::string join_numbers(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) {
        if (!out.empty()) out += ' ';
        out += format_number(x);
    }
    return out.empty() ? "none" : out;
}

struct SeriesSet {
    CsvTable table;
    ColumnStats stats;
};

}  // namespace detail

/// Revival analysis attached to the variance and inversion summaries.
inline std::string revival_summary(const std::string& curve, const TimeSeries& series) {
    // The detector needs at least 16 samples and more than two per window (5% of the span).
    if (series.size() < 16 || (series.size() - 1) * default_revival_window_fraction <= 2.0)
        return curve + ": sweep too coarse for revival detection";
    const RevivalReport rep = detect_revivals(series);
    std::string out = curve + ": revival centers " + detail::join_numbers(rep.centers);
    if (const auto spacing = revival_spacing(rep)) out += ", primary spacing " + format_number(*spacing);
    return out;
}

inline RunResult run_scenario(const Scenario& sc, const RunOptions& opt) {
    detail::prepare_output_dir(opt.out_dir);
    RunResult result;

    const bool want_inv = sc.has(Observable::inversion);
    const bool want_pv = sc.has(Observable::phase_variances);
    const bool want_nv = sc.has(Observable::photon_variances);
    const bool want_w = sc.has(Observable::wigner_origin);

    auto emit = [&](const std::string& file, const CsvTable& table, const detail::ColumnStats& stats,
                    const std::vector<std::string>& notes) {
        table.write((opt.out_dir / file).string());
        FileSummary fs{file, table.rows(), stats.describe()};
        for (const auto& n : notes) fs.stats += "; " + n;
        result.files.push_back(std::move(fs));
    };

    if (sc.sweep && (want_inv || want_pv || want_nv || want_w)) {
        const Sweep& sw = *sc.sweep;
        const auto times = uniform_times(sw.t_min, sw.t_max, sw.steps);
        detail::SeriesSet inv{CsvTable({"curve", "T", "sigma_z"}), {}};
        detail::SeriesSet pv{CsvTable({"curve", "T", "var1", "var2", "var_sum", "var_diff"}), {}};
        detail::SeriesSet nv{CsvTable({"curve", "T", "var1", "var2", "var_sum", "var_diff"}), {}};
        detail::SeriesSet wo{CsvTable({"curve", "T", "w1", "w2", "w_joint"}), {}};
        std::vector<std::string> inv_notes;
        std::vector<std::string> pv_notes;
        for (const auto& curve : sc.curves) {
            if (want_inv) {
                const TimeSeries s = inversion_series(curve.config, times);
                for (std::size_t i = 0; i < s.size(); ++i) {
                    inv.table.add_row(curve.label, {s.times[i], s.values[i]});
                    inv.stats.add("sigma_z", s.values[i]);
                }
                inv_notes.push_back(revival_summary(curve.label, s));
            }
            if (!(want_pv || want_nv || want_w)) continue;
            const BlockTable blocks = make_block_table(curve.config);
            TimeSeries var1;
            for (double T : times) {
                const EvolvedState st = evolve(blocks, T);
                if (want_pv) {
                    const PhaseVariances v = phase_variances(st);
                    pv.table.add_row(curve.label, {T, v.var1, v.var2, v.var_sum, v.var_diff});
                    pv.stats.add("var1", v.var1);
                    pv.stats.add("var2", v.var2);
                    var1.times.push_back(T);
                    var1.values.push_back(v.var1);
                }
                if (want_nv) {
                    const PhotonMoments m = photon_moments(st);
                    nv.table.add_row(curve.label, {T, m.var1(), m.var2(), m.var_sum(), m.var_diff()});
                    nv.stats.add("var1", m.var1());
                    nv.stats.add("var_sum", m.var_sum());
                    nv.stats.add("var_diff", m.var_diff());
                }
                if (want_w) {
                    const WignerOriginValues w = wigner_origin(st);
                    wo.table.add_row(curve.label, {T, w.w1, w.w2, w.w_joint});
                    wo.stats.add("w1", w.w1);
                    wo.stats.add("w2", w.w2);
                    wo.stats.add("w_joint", w.w_joint);
                }
            }
            if (want_pv) pv_notes.push_back("var1 " + revival_summary(curve.label, var1));
        }
        if (want_inv) emit("inversion.csv", inv.table, inv.stats, inv_notes);
        if (want_pv) emit("phase_variances.csv", pv.table, pv.stats, pv_notes);
        if (want_nv) emit("photon_variances.csv", nv.table, nv.stats, {});
        if (want_w) emit("wigner_origin.csv", wo.table, wo.stats, {});
    }

    bool want_1d = sc.has(Observable::phase1d);
    const bool want_2d = sc.has(Observable::phase2d);
    if (opt.snapshots && !want_2d) want_1d = true;
    if (want_1d || want_2d) {
        // Group curves by snapshot time, keeping first-seen order.
        std::vector<double> order;
        std::map<double, std::vector<const Curve*>> at;
        for (const auto& curve : sc.curves) {
            const auto& ts = opt.snapshots ? *opt.snapshots : sc.snapshots_for(curve);
            for (double T : ts) {
                if (!at.contains(T)) order.push_back(T);
                at[T].push_back(&curve);
            }
        }
        if (order.empty()) throw std::domain_error("scenario '" + sc.name + "' has no snapshot times");
        const PeriodicGrid grid(sc.phase_points);
        const PeriodicGrid grid2d(sc.phase2d_points);
        for (double T : order) {
            CsvTable p1({"curve", "theta", "P1", "P2"});
            CsvTable p2({"curve", "theta1", "theta2", "P"});
            detail::ColumnStats s1;
            detail::ColumnStats s2;
            std::vector<std::string> notes1;
            for (const Curve* curve : at[T]) {
                const EvolvedState st = evolve(curve->config, T);
                if (want_1d) {
                    const auto a = marginal_distribution(st, Mode::first, grid);
                    const auto b = marginal_distribution(st, Mode::second, grid);
                    for (std::size_t g = 0; g < grid.count(); ++g) {
                        p1.add_row(curve->label, {grid.point(g), a.values[g], b.values[g]});
                        s1.add("P1", a.values[g]);
                        s1.add("P2", b.values[g]);
                    }
                    const auto peaks = periodic_peaks(a.values, grid, 0.1);
                    std::vector<double> at_theta;
                    for (const auto& p : peaks) at_theta.push_back(p.position);
                    notes1.push_back(curve->label + ": P1 peaks at " + detail::join_numbers(at_theta));
                }
                if (want_2d) {
                    const auto j = joint_distribution(st, grid2d, grid2d);
                    for (std::size_t g1 = 0; g1 < grid2d.count(); ++g1)
                        for (std::size_t g2 = 0; g2 < grid2d.count(); ++g2) {
                            p2.add_row(curve->label, {grid2d.point(g1), grid2d.point(g2), j.values(g1, g2)});
                            s2.add("P", j.values(g1, g2));
                        }
                }
            }
            if (want_1d) emit("phase1d_" + detail::time_tag(T) + ".csv", p1, s1, notes1);
            if (want_2d) emit("phase2d_" + detail::time_tag(T) + ".csv", p2, s2, {});
        }
    }

    if (!sc.note.empty()) result.notes.push_back(sc.note);

    if (opt.gnuplot) {
        std::string gp = "set datafile separator ','\nset key autotitle columnhead\n";
        for (const auto& f : result.files) {
            const bool surface = f.file.rfind("phase2d_", 0) == 0;
            gp += "set title '" + f.file + "'\n";
            std::string plot = surface ? "splot" : "plot";
            bool first = true;
            for (const auto& curve : sc.curves) {
                gp += first ? plot + " " : ", \\\n     ";
                first = false;
                const std::string pick = "(strcol(1) eq '" + curve.label + "' ? ";
                if (surface) {
                    gp += "'" + f.file + "' using 2:3:" + pick + "$4 : 1/0) with points title '" + curve.label + "'";
                } else {
                    gp += "'" + f.file + "' using 2:" + pick + "$3 : 1/0) with lines title '" + curve.label + "'";
                }
            }
            gp += "\npause -1\n";
        }
        std::ofstream out(opt.out_dir / "plot.gp", std::ios::binary);
        if (!out) throw OutputDirError("cannot write plot.gp");
        out << gp;
        result.files.push_back({"plot.gp", 0, "gnuplot script"});
    }
    return result;
}

}  // namespace tmjcm::cli
