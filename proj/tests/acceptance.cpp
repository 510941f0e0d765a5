// Acceptance run: one PASS / WARN / FAIL line per criterion. Exit status is
// nonzero only when a criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tmjcm/analysis.hpp"
#include "tmjcm/cli/runner.hpp"
#include "tmjcm/cli/scenario.hpp"
#include "tmjcm/cli/verify.hpp"
#include "tmjcm/oracle.hpp"
#include "tmjcm/phase.hpp"
#include "tmjcm/wigner.hpp"

using namespace tmjcm;
using namespace tmjcm::cli;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, warn, fail };

struct Outcome {
    Verdict verdict = Verdict::fail;
    std::string detail;
};

Outcome judge(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

std::string num(double v) { return format_shortest(std::round(v * 1e6) / 1e6); }

std::string sci(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

TimeSeries variance_series(const SystemConfig& cfg, Mode mode, const std::vector<double>& times) {
    const BlockTable b = make_block_table(cfg);
    TimeSeries s;
    s.times = times;
    for (double T : times) s.values.push_back(single_mode_phase_variance(evolve(b, T), mode));
    return s;
}

double first_center(const TimeSeries& s) {
    const RevivalReport r = detect_revivals(s);
    return r.centers.empty() ? std::nan("") : r.centers.front();
}

Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const auto cases = oracle_matrix();
    const OracleMatrixOutcome o = run_oracle_matrix(cases, analytic_evolver, 1e-8);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return judge(o.failures == 0 && secs < 300.0, std::to_string(o.cases) + " configs, worst 1-F " +
                                                      sci(o.worst_defect) + " at " + o.worst_case + ", " + num(secs) +
                                                      " s");
}

Outcome unitarity_and_normalization() {
    double worst_norm = 0.0;
    double worst_dist = 0.0;
    std::size_t states = 0;
    const Tolerances tol;
    for (const auto& sc : presets()) {
        for (const auto& curve : sc.curves) {
            const BlockTable b = make_block_table(curve.config);
            std::vector<double> times = sc.snapshots_for(curve);
            if (sc.sweep) {
                const auto sweep = uniform_times(sc.sweep->t_min, sc.sweep->t_max, sc.sweep->steps);
                times.insert(times.end(), sweep.begin(), sweep.end());
            }
            for (double T : times) {
                worst_norm = std::max(worst_norm, std::abs(evolve(b, T).norm() - 1.0));
                ++states;
            }
        }
        const CheckResult c = check_preset_invariants(sc, analytic_evolver, tol);
        worst_dist = std::max(worst_dist, c.value);
    }
    return judge(worst_norm <= 1e-10 && worst_dist <= 1e-8,
                 std::to_string(states) + " states, worst norm deviation " + sci(worst_norm) +
                     ", worst distribution deviation " + sci(worst_dist));
}

Outcome wigner_identities() {
    const auto times = uniform_times(0.0, 12.0, 1201);
    double worst = 0.0;
    std::string detail;
    for (const auto& [label, cfg] :
         {std::pair<const char*, SystemConfig>{"even cats k=(1,1)", make_config({5.0, 1}, {5.0, 1}, 1, 1)},
          {"even cats k=(2,2)", make_config({5.0, 1}, {5.0, 1}, 2, 2)},
          {"coherent k=(1,1)", make_config({5.0, 0}, {5.0, 0}, 1, 1)},
          {"coherent k=(3,1)", make_config({5.0, 0}, {5.0, 0}, 3, 1)}}) {
        const IdentityResiduals r = origin_inversion_identity(cfg, times);
        const double m = r.applicable() ? r.max_residual() : 1.0;
        worst = std::max(worst, m);
        detail += std::string(detail.empty() ? "" : ", ") + label + " " + sci(m);
    }
    return judge(worst < 1e-6, detail);
}

Outcome revival_times() {
    const Scenario& sc = find_preset("fig1a");
    const auto times = uniform_times(sc.sweep->t_min, sc.sweep->t_max, sc.sweep->steps);
    const double coherent = first_center(inversion_series(sc.curves[0].config, times));
    const double cats = first_center(inversion_series(sc.curves[1].config, times));
    const double ratio = coherent / cats;
    const bool ok = coherent >= 6.0 && coherent <= 6.6 && cats >= 3.0 && cats <= 3.5 && std::abs(ratio - 2.0) <= 0.3;
    return judge(ok, "coherent " + num(coherent) + ", even cats " + num(cats) + ", ratio " + num(ratio));
}

std::vector<PeriodicPeak> p1_peaks(const SystemConfig& cfg, double T, const PeriodicGrid& grid) {
    const PhaseDistribution1D p = marginal_distribution(evolve(cfg, T), Mode::first, grid);
    return periodic_peaks(p.values, grid, 0.1);
}

Outcome peak_structure() {
    const PeriodicGrid grid(512);
    const SystemConfig coherent = find_preset("fig2a").curves[0].config;
    const SystemConfig cats = find_preset("fig2b").curves[0].config;

    const auto a = p1_peaks(coherent, 4.42, grid);
    bool ok_a = a.size() == 2;
    if (ok_a) {
        ok_a = std::abs(a[0].position + 2.0 * pi / 3.0) <= 0.3 && std::abs(a[1].position - 2.0 * pi / 3.0) <= 0.3;
    }
    const PhaseDistribution1D wings = marginal_distribution(evolve(coherent, 6.2999), Mode::first, grid);
    const auto top = std::max_element(wings.values.begin(), wings.values.end()) - wings.values.begin();
    const double top_theta = grid.point(static_cast<std::size_t>(top));
    const bool ok_wings = pi - std::abs(top_theta) <= 0.3;
    const auto b = p1_peaks(cats, 1.8, grid);

    std::string detail = "T=4.42: " + std::to_string(a.size()) + " maxima at";
    for (const auto& p : a) detail += " " + num(p.position);
    detail += "; T=6.2999: maximum at " + num(top_theta) + "; even cats T=1.8: " + std::to_string(b.size()) + " maxima";
    return judge(ok_a && ok_wings && b.size() == 4, detail);
}

Outcome variance_average() {
    const Scenario& sc = find_preset("fig6a");
    const auto times = uniform_times(sc.sweep->t_min, sc.sweep->t_max, sc.sweep->steps);
    const TimeSeries s = variance_series(sc.curves[0].config, Mode::first, times);
    double avg = 0.0;
    // Trapezoid rule over the uniform grid.
    for (std::size_t i = 0; i + 1 < s.size(); ++i) avg += 0.5 * (s.values[i] + s.values[i + 1]) * (times[i + 1] - times[i]);
    avg /= times.back() - times.front();
    const double rel = std::abs(avg / (pi * pi / 3.0) - 1.0);
    const RevivalReport r = detect_revivals(s);
    return judge(rel <= 0.05 && r.centers.size() >= 2,
                 "time average " + num(avg) + " (" + num(100.0 * rel) + "% from pi^2/3), " +
                     std::to_string(r.centers.size()) + " envelope peaks");
}

Outcome periodicity() {
    const Scenario& sc = find_preset("fig7a");
    const auto times = uniform_times(sc.sweep->t_min, sc.sweep->t_max, sc.sweep->steps);
    const auto five = revival_spacing(detect_revivals(variance_series(sc.curves[0].config, Mode::first, times)));
    const auto six =
        revival_spacing(detect_revivals(variance_series(make_config({6.0, 1}, {6.0, 1}, 2, 2), Mode::first, times)));
    if (!five || !six) return {Verdict::fail, "no revival spacing detected"};
    const double target = pi / 2.0;
    const bool ok = std::abs(*five / target - 1.0) <= 0.1 && std::abs(*six / *five - 1.0) <= 0.1;
    return judge(ok, "spacing " + num(*five) + " at |alpha|=5, " + num(*six) + " at |alpha|=6 (pi/2 = " +
                         num(target) + ")");
}

Outcome contraction() {
    const SystemConfig two_mode = make_config({5.0, 0}, {5.0, 0}, 1, 1);
    const SystemConfig single = make_config({0.0, 0}, {5.0, 0}, 0, 1);
    const double t_two = first_center(variance_series(two_mode, Mode::first, uniform_times(0.0, 30.0, 3001)));
    const double t_one = first_center(variance_series(single, Mode::second, uniform_times(0.0, 100.0, 5001)));
    const double factor = t_one / t_two;
    const double expected = 4.0 * std::sqrt(25.0);
    const std::string detail = "revival " + num(t_two) + " vs single-mode " + num(t_one) + ", factor " + num(factor) +
                               " (claimed " + num(expected) + ")";
    if (!std::isfinite(factor)) return {Verdict::fail, detail};
    return {std::abs(factor / expected - 1.0) <= 0.25 ? Verdict::pass : Verdict::warn, detail};
}

Outcome small_instance_brute_force() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_p = 0.0;
    double worst_m = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        const int k1 = 1 + trial % 2;
        const int k2 = 1 + (trial / 2) % 2;
        SystemConfig c = make_config({std::polar(0.4 + u(rng), 6.0 * u(rng)), trial % 3 == 0 ? 1 : 0},
                                     {std::polar(0.4 + u(rng), 6.0 * u(rng)), 0}, k1, k2, 1.5 * u(rng), 6.0 * u(rng));
        c.dim1 = 6 - static_cast<std::size_t>(k1);
        c.dim2 = 6 - static_cast<std::size_t>(k2);
        const EvolvedState s = evolve(c, 0.5 + 5.0 * u(rng));
        const PeriodicGrid g(16);
        const PhaseDistribution2D p = joint_distribution(s, g, g);
        for (std::size_t a = 0; a < g.count(); ++a)
            for (std::size_t b = 0; b < g.count(); ++b) {
                double acc = 0.0;
                for (const auto* br : {&s.psi_plus, &s.psi_minus}) {
                    cplx sum{};
                    for (std::size_t n1 = 0; n1 < br->rows(); ++n1)
                        for (std::size_t n2 = 0; n2 < br->cols(); ++n2)
                            for (std::size_t m1 = 0; m1 < br->rows(); ++m1)
                                for (std::size_t m2 = 0; m2 < br->cols(); ++m2)
                                    sum += (*br)(n1, n2) * std::conj((*br)(m1, m2)) *
                                           std::polar(1.0, -(double(n1) - double(m1)) * g.point(a) -
                                                               (double(n2) - double(m2)) * g.point(b));
                    acc += sum.real();
                }
                worst_p = std::max(worst_p, std::abs(p.values(a, b) - acc / (4.0 * pi * pi)));
            }
        const PhaseMoments x = phase_moments(s);
        const PhaseMoments y = phase_moments_quadrature(s, 64);
        worst_m = std::max({worst_m, std::abs(x.mean1 - y.mean1), std::abs(x.mean2 - y.mean2),
                            std::abs(x.mean_sq1 - y.mean_sq1), std::abs(x.mean_sq2 - y.mean_sq2),
                            std::abs(x.cross - y.cross)});
    }
    return judge(worst_p <= 1e-12 && worst_m <= 1e-9,
                 "pointwise " + sci(worst_p) + ", moments " + sci(worst_m) + " over 6 configurations");
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "tmjcm_acceptance";
    fs::remove_all(root);
    std::size_t compared = 0;
    std::string mismatch;
    for (const char* name : {"fig1a", "fig2b", "fig4", "fig7b", "fig8b"}) {
        for (const char* run : {"first", "second"}) {
            RunOptions opt;
            opt.out_dir = root / run / name;
            run_scenario(find_preset(name), opt);
        }
        for (const auto& entry : fs::directory_iterator(root / "first" / name)) {
            const fs::path other = root / "second" / name / entry.path().filename();
            auto slurp = [](const fs::path& p) {
                std::ifstream in(p, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                return ss.str();
            };
            if (slurp(entry.path()) != slurp(other)) mismatch = entry.path().filename().string();
            ++compared;
        }
    }
    fs::remove_all(root);
    return judge(mismatch.empty() && compared > 0,
                 std::to_string(compared) + " files compared" + (mismatch.empty() ? "" : ", differs: " + mismatch));
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"unitarity and normalization", unitarity_and_normalization},
        {"Wigner origin identities", wigner_identities},
        {"inversion revival times", revival_times},
        {"phase distribution peaks", peak_structure},
        {"phase variance average and envelope", variance_average},
        {"k=(2,2) variance periodicity", periodicity},
        {"revival contraction factor", contraction},
        {"small-instance brute force", small_instance_brute_force},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::warn ? "WARN" : "FAIL";
        if (o.verdict == Verdict::fail) ++failures;
        std::cout << tag << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
