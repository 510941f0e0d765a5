#pragma once

// Self-check suites behind `tmjcm verify`:
//   oracle      analytic evolution vs. the Runge-Kutta integrator over a config matrix
//   wigner      origin-value identities against the atomic inversion
//   invariants  norm, phase-distribution normalization and marginal consistency per preset

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tmjcm/cli/csv.hpp"
#include "tmjcm/cli/scenario.hpp"
#include "tmjcm/dynamics.hpp"
#include "tmjcm/oracle.hpp"
#include "tmjcm/phase.hpp"
#include "tmjcm/wigner.hpp"

namespace tmjcm::cli {

using Evolver = std::function<EvolvedState(const SystemConfig&, double)>;

inline EvolvedState analytic_evolver(const SystemConfig& cfg, double T) { return evolve(cfg, T); }

struct Tolerances {
    double fidelity_defect = 1e-8;    ///< 1 - |<oracle|analytic>|^2
    double identity_residual = 1e-6;  ///< origin Wigner identities
    double norm = 1e-10;              ///< | ||psi||^2 - 1 |
    double distribution = 1e-8;       ///< phase-distribution integrals and marginals
};

inline Tolerances tolerance_profile(const std::string& name) {
    if (name == "default") return {};
    if (name == "strict") return {1e-10, 1e-9, 1e-10, 1e-10};
    throw std::invalid_argument("unknown tolerance profile '" + name + "' (expected default or strict)");
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"oracle", "wigner", "invariants"};
    return names;
}

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;  ///< worst measured deviation
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }

    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

struct OracleCase {
    SystemConfig config;
    double T = 0.0;
};

inline std::string describe(const SystemConfig& c) {
    return "eps=(" + std::to_string(c.mode1.epsilon) + "," + std::to_string(c.mode2.epsilon) + ") k=(" +
           std::to_string(c.k1) + "," + std::to_string(c.k2) + ") |alpha|=(" + format_shortest(std::abs(c.mode1.alpha)) +
           "," + format_shortest(std::abs(c.mode2.alpha)) + ") varphi=" + format_shortest(c.varphi) +
           " phi=" + format_shortest(c.phi) + " dims=(" + std::to_string(c.dim1) + "," + std::to_string(c.dim2) + ")";
}

/// Truncation used by the oracle matrix; with k <= 2 the oracle extents stay at or below 40.
inline std::size_t oracle_matrix_dim(double amplitude) { return amplitude > 2.0 ? 36 : 16; }

/// (eps1, eps2) in {0, +-1}^2, (k1, k2) in {(1,1), (2,1), (2,2), (0,1)}, varphi in
/// {0, pi/4, pi/2}, phi in {0, pi/3}, |alpha| in {0, 1, 3}, T in {0.7, 3.1, 9.9}.
/// Odd cats of the vacuum do not exist and are skipped.
inline std::vector<OracleCase> oracle_matrix() {
    std::vector<OracleCase> out;
    const std::array<std::pair<int, int>, 4> ks{{{1, 1}, {2, 1}, {2, 2}, {0, 1}}};
    for (const auto& [k1, k2] : ks)
        for (double amp : {0.0, 1.0, 3.0})
            for (double T : {0.7, 3.1, 9.9})
                for (int e1 : {0, 1, -1})
                    for (int e2 : {0, 1, -1}) {
                        if (amp == 0.0 && (e1 == -1 || e2 == -1)) continue;
                        for (double varphi : {0.0, pi / 4.0, pi / 2.0})
                            for (double phi : {0.0, pi / 3.0}) {
                                SystemConfig c;
                                c.mode1 = {cplx{amp, 0.0}, e1};
                                c.mode2 = {std::polar(amp, pi / 5.0), e2};
                                c.k1 = k1;
                                c.k2 = k2;
                                c.varphi = varphi;
                                c.phi = phi;
                                c.dim1 = c.dim2 = oracle_matrix_dim(amp);
                                out.push_back({c, T});
                            }
                    }
    return out;
}

struct OracleMatrixOutcome {
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst_defect = 0.0;
    std::string worst_case;
    std::string first_failure;
};

/// Runs the cases; one RK4 propagator is built per (k, dims, T) and shared.
inline OracleMatrixOutcome run_oracle_matrix(const std::vector<OracleCase>& cases, const Evolver& evolver,
                                             double tolerance) {
    OracleMatrixOutcome r;
    std::map<std::tuple<int, int, std::size_t, std::size_t, double>, oracle::Propagator> cache;
    for (const auto& oc : cases) {
        const auto key = std::make_tuple(oc.config.k1, oc.config.k2, oc.config.dim1, oc.config.dim2, oc.T);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const oracle::SparseMatrix h = oracle::build_hamiltonian(oc.config);
            it = cache.emplace(key, oracle::Propagator(h, oc.T, oracle::default_step(h))).first;
        }
        const oracle::DenseStateVector numeric = it->second.apply(oracle::initial_state(oc.config));
        const oracle::DenseStateVector analytic = oracle::to_dense(evolver(oc.config, oc.T));
        double defect = 1.0;
        if (analytic.amplitudes.size() == numeric.amplitudes.size()) {
            defect = 1.0 - oracle::fidelity(numeric, analytic);
        }
        if (!std::isfinite(defect)) defect = 1.0;
        ++r.cases;
        const std::string name = describe(oc.config) + " T=" + format_shortest(oc.T);
        if (r.worst_case.empty() || defect > r.worst_defect) {
            r.worst_defect = defect;
            r.worst_case = name;
        }
        if (defect > tolerance) {
            if (r.failures == 0) r.first_failure = name;
            ++r.failures;
        }
    }
    return r;
}

struct IdentityCase {
    std::string name;
    SystemConfig config;
    OriginIdentity expected;
    double t_max;
    std::size_t samples;
};

inline std::vector<IdentityCase> wigner_identity_cases() {
    auto cfg = [](int e1, int e2, int k1, int k2, double amp) {
        return make_config({amp, e1}, {amp, e2}, k1, k2, 0.0, 0.0);
    };
    return {
        {"even cats, k=(1,1): pi W1 = pi W2 = sigma_z, pi^2 W = 1", cfg(1, 1, 1, 1, 5.0),
         OriginIdentity::even_cats_odd_transitions, 12.0, 241},
        {"even cats, k=(2,2): all origin values constant", cfg(1, 1, 2, 2, 5.0), OriginIdentity::even_cats_even_transitions,
         12.0, 241},
        {"even cats, k=(1,2): mode 1 tracks sigma_z", cfg(1, 1, 1, 2, 5.0), OriginIdentity::even_cats_mixed_transitions,
         12.0, 121},
        {"coherent, k=(1,1): W(0,T) = W1(0,0) W2(0,0)", cfg(0, 0, 1, 1, 5.0), OriginIdentity::coherent_odd_transitions,
         12.0, 241},
        {"coherent, k=(3,1): W(0,T) = W1(0,0) W2(0,0)", cfg(0, 0, 3, 1, 3.0), OriginIdentity::coherent_odd_transitions,
         12.0, 121},
    };
}

inline CheckResult check_identity(const IdentityCase& ic, double tol) {
    CheckResult c{"wigner", ic.name, false, 0.0, tol, ""};
    const IdentityResiduals r = origin_inversion_identity(ic.config, uniform_times(0.0, ic.t_max, ic.samples));
    if (r.identity != ic.expected) {
        c.detail = std::string("expected identity ") + to_string(ic.expected) + ", classified as " + to_string(r.identity);
        c.value = 1.0;
        return c;
    }
    c.value = r.max_residual();
    c.passed = c.value < tol;
    c.detail = "max residual " + format_number(c.value);
    return c;
}

/// Power-of-two grid finer than the state's extents.
inline PeriodicGrid invariant_grid(const EvolvedState& s) {
    std::size_t n = 8;
    while (n <= std::max(s.extent1(), s.extent2())) n *= 2;
    return PeriodicGrid(n);
}

struct InvariantDeviations {
    double norm = 0.0;
    double joint = 0.0;
    double marginal = 0.0;
};

inline InvariantDeviations invariant_deviations(const EvolvedState& s) {
    InvariantDeviations d;
    d.norm = std::abs(s.norm() - 1.0);
    const PeriodicGrid g = invariant_grid(s);
    const PhaseDistribution2D joint = joint_distribution(s, g, g);
    d.joint = std::abs(joint.integral() - 1.0);
    for (Mode m : {Mode::first, Mode::second}) {
        const auto direct = marginal_distribution(s, m, g);
        const auto integrated = joint.integrate_out(m);
        for (std::size_t i = 0; i < g.count(); ++i)
            d.marginal = std::max(d.marginal, std::abs(direct.values[i] - integrated.values[i]));
        d.joint = std::max(d.joint, std::abs(direct.integral() - 1.0));
    }
    return d;
}

/// Times at which a preset curve is checked: its snapshots, or the sweep ends and midpoint.
inline std::vector<double> invariant_times(const Scenario& sc, const Curve& c) {
    if (!sc.snapshots_for(c).empty()) return sc.snapshots_for(c);
    const Sweep sw = sc.sweep.value_or(Sweep{});
    return {sw.t_min, 0.5 * (sw.t_min + sw.t_max), sw.t_max};
}

inline CheckResult check_preset_invariants(const Scenario& sc, const Evolver& evolver, const Tolerances& tol) {
    CheckResult c{"invariants", sc.name + ": norm, joint normalization, marginals", true, 0.0, tol.distribution, ""};
    InvariantDeviations worst;
    for (const auto& curve : sc.curves)
        for (double T : invariant_times(sc, curve)) {
            const InvariantDeviations d = invariant_deviations(evolver(curve.config, T));
            worst.norm = std::max(worst.norm, d.norm);
            worst.joint = std::max(worst.joint, d.joint);
            worst.marginal = std::max(worst.marginal, d.marginal);
        }
    c.passed = worst.norm <= tol.norm && worst.joint <= tol.distribution && worst.marginal <= tol.distribution;
    c.value = std::max({worst.norm, worst.joint, worst.marginal});
    c.detail = "norm " + format_number(worst.norm) + ", joint integral " + format_number(worst.joint) + ", marginals " +
               format_number(worst.marginal);
    return c;
}

struct VerifyOptions {
    std::set<std::string> only;  ///< empty = every suite
    Tolerances tol;
    Evolver evolver = analytic_evolver;
    std::ostream* log = nullptr;
};

inline VerifyReport verify(const VerifyOptions& opt) {
    for (const auto& s : opt.only)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw std::invalid_argument("unknown suite '" + s + "' (expected oracle, wigner or invariants)");
    auto enabled = [&](const std::string& s) { return opt.only.empty() || opt.only.contains(s); };
    VerifyReport rep;
    auto record = [&](CheckResult c) {
        if (opt.log)
            *opt.log << (c.passed ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " (" << c.detail << ")\n";
        rep.checks.push_back(std::move(c));
    };

    if (enabled("oracle")) {
        const auto cases = oracle_matrix();
        // Report per transition pair so a failure points at a block family.
        std::map<std::pair<int, int>, std::vector<OracleCase>> by_k;
        for (const auto& oc : cases) by_k[{oc.config.k1, oc.config.k2}].push_back(oc);
        for (const auto& [k, group] : by_k) {
            const OracleMatrixOutcome o = run_oracle_matrix(group, opt.evolver, opt.tol.fidelity_defect);
            CheckResult c{"oracle", "fidelity k=(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")",
                          o.failures == 0, o.worst_defect, opt.tol.fidelity_defect, ""};
            c.detail = std::to_string(o.cases) + " cases, worst 1-F " + format_number(o.worst_defect);
            if (o.failures) c.detail += ", " + std::to_string(o.failures) + " failing, first: " + o.first_failure;
            record(std::move(c));
        }
    }
    if (enabled("wigner")) {
        for (const auto& ic : wigner_identity_cases()) record(check_identity(ic, opt.tol.identity_residual));
    }
    if (enabled("invariants")) {
        for (const auto& sc : presets()) record(check_preset_invariants(sc, opt.evolver, opt.tol));
    }
    return rep;
}

}  // namespace tmjcm::cli
