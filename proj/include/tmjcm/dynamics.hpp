#pragma once

// Exact interaction-picture evolution of one two-level atom coupled to two
// field modes through k1-photon emission into mode 1 and k2-photon absorption
// from mode 2.
//
// The interaction only couples the two-state blocks
//     { |+, n, m + k2>,  |-, n + k1, m> }      (n, m >= 0)
// with matrix element Lambda_{n,m} = sqrt((n+k1)! (m+k2)! / (n! m!)).
// Excited states with fewer than k2 photons in mode 2 and ground states with
// fewer than k1 photons in mode 1 are annihilated by the interaction and keep
// their initial amplitude. Each block is a 2x2 rotation, so nothing larger than
// a scalar cos/sin pair is ever formed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmjcm/numerics.hpp"
#include "tmjcm/states.hpp"
#include "tmjcm/time_series.hpp"

namespace tmjcm {

struct SystemConfig {
    CatStateSpec mode1;
    CatStateSpec mode2;
    int k1 = 1;
    int k2 = 1;
    double varphi = 0.0;  ///< atomic mixing angle: cos(varphi)|+> + e^{i phi} sin(varphi)|->
    double phi = 0.0;     ///< relative atomic phase
    std::size_t dim1 = min_truncation;
    std::size_t dim2 = min_truncation;

    bool operator==(const SystemConfig&) const = default;
};

inline constexpr double default_tail_tol = 1e-12;

/// Throws std::domain_error naming the first offending field.
inline void validate(const SystemConfig& cfg) {
    validate(cfg.mode1);
    validate(cfg.mode2);
    if (cfg.k1 < 0 || cfg.k2 < 0) throw std::domain_error("k1, k2 must be nonnegative");
    if (cfg.k1 + cfg.k2 < 1) throw std::domain_error("k1 + k2 must be at least 1");
    if (cfg.dim1 <= static_cast<std::size_t>(cfg.k1)) throw std::domain_error("dim1 must exceed k1");
    if (cfg.dim2 <= static_cast<std::size_t>(cfg.k2)) throw std::domain_error("dim2 must exceed k2");
    if (!std::isfinite(cfg.varphi)) throw std::domain_error("varphi must be finite");
    if (!std::isfinite(cfg.phi)) throw std::domain_error("phi must be finite");
}

/// Config with truncation dims chosen from the mode amplitudes.
inline SystemConfig make_config(CatStateSpec mode1, CatStateSpec mode2, int k1, int k2, double varphi = 0.0,
                                double phi = 0.0, double tail_tol = default_tail_tol) {
    SystemConfig cfg{mode1, mode2, k1, k2, varphi, phi, 0, 0};
    cfg.dim1 = std::max(choose_truncation(mode1.alpha, tail_tol), static_cast<std::size_t>(std::max(k1, 0)) + 1);
    cfg.dim2 = std::max(choose_truncation(mode2.alpha, tail_tol), static_cast<std::size_t>(std::max(k2, 0)) + 1);
    validate(cfg);
    return cfg;
}

/// Lambda_{n,m} = sqrt((m+k2)! (n+k1)! / (n! m!)).
inline double rabi_frequency(int k1, int k2, std::size_t n, std::size_t m) {
    if (k1 < 0 || k2 < 0) throw std::domain_error("rabi_frequency: k1, k2 must be nonnegative");
    const double log_l = log_factorial_ratio(n + static_cast<std::size_t>(k1), n) +
                         log_factorial_ratio(m + static_cast<std::size_t>(k2), m);
    return std::exp(0.5 * log_l);
}

/// Joint atom+field state at scaled time T.
///
/// psi_plus(n1, n2) multiplies |+, n1, n2>, psi_minus(n1, n2) multiplies |-, n1, n2>.
/// Both arrays have extents (dim1 + k1) x (dim2 + k2).
struct EvolvedState {
    double T = 0.0;
    int k1 = 0;
    int k2 = 0;
    Matrix<cplx> psi_plus;
    Matrix<cplx> psi_minus;

    std::size_t extent1() const noexcept { return psi_plus.rows(); }
    std::size_t extent2() const noexcept { return psi_plus.cols(); }

    double norm() const noexcept {
        double acc = 0.0;
        for (const auto& a : psi_plus.flat()) acc += std::norm(a);
        for (const auto& a : psi_minus.flat()) acc += std::norm(a);
        return acc;
    }
};

/// Per-block data that does not depend on T. Shared by evolve() and the
/// inversion fast path.
struct BlockTable {
    std::size_t dim1 = 0;
    std::size_t dim2 = 0;
    int k1 = 0;
    int k2 = 0;
    std::vector<double> rabi;        ///< Lambda_{n,m}, index n * dim2 + m
    std::vector<cplx> excited0;      ///< C_{n,m+k2} cos(varphi)
    std::vector<cplx> ground0;       ///< C_{n+k1,m} e^{i phi} sin(varphi)
    Matrix<cplx> frozen_plus;        ///< stationary excited amplitudes, n2 < k2
    Matrix<cplx> frozen_minus;       ///< stationary ground amplitudes, n1 < k1
};

inline BlockTable make_block_table(const SystemConfig& cfg) {
    validate(cfg);
    BlockTable b;
    b.dim1 = cfg.dim1;
    b.dim2 = cfg.dim2;
    b.k1 = cfg.k1;
    b.k2 = cfg.k2;
    const auto k1 = static_cast<std::size_t>(cfg.k1);
    const auto k2 = static_cast<std::size_t>(cfg.k2);
    const auto c1 = amplitude_table(cfg.mode1, cfg.dim1 + k1).coeffs;
    const auto c2 = amplitude_table(cfg.mode2, cfg.dim2 + k2).coeffs;
    const double cv = std::cos(cfg.varphi);
    const cplx sv = std::polar(std::sin(cfg.varphi), cfg.phi);

    const std::size_t pairs = cfg.dim1 * cfg.dim2;
    b.rabi.resize(pairs);
    b.excited0.resize(pairs);
    b.ground0.resize(pairs);
    // Rabi frequencies from a log-space column/row split: Lambda^2 = r1(n) r2(m).
    std::vector<double> log_r1(cfg.dim1);
    std::vector<double> log_r2(cfg.dim2);
    for (std::size_t n = 0; n < cfg.dim1; ++n) log_r1[n] = log_factorial_ratio(n + k1, n);
    for (std::size_t m = 0; m < cfg.dim2; ++m) log_r2[m] = log_factorial_ratio(m + k2, m);
    for (std::size_t n = 0; n < cfg.dim1; ++n) {
        for (std::size_t m = 0; m < cfg.dim2; ++m) {
            const std::size_t i = n * cfg.dim2 + m;
            b.rabi[i] = std::exp(0.5 * (log_r1[n] + log_r2[m]));
            b.excited0[i] = c1[n] * c2[m + k2] * cv;
            b.ground0[i] = c1[n + k1] * c2[m] * sv;
        }
    }
    b.frozen_plus = Matrix<cplx>(cfg.dim1, k2);
    for (std::size_t n = 0; n < cfg.dim1; ++n)
        for (std::size_t m = 0; m < k2; ++m) b.frozen_plus(n, m) = c1[n] * c2[m] * cv;
    b.frozen_minus = Matrix<cplx>(k1, cfg.dim2);
    for (std::size_t n = 0; n < k1; ++n)
        for (std::size_t m = 0; m < cfg.dim2; ++m) b.frozen_minus(n, m) = c1[n] * c2[m] * sv;
    return b;
}

inline EvolvedState evolve(const BlockTable& b, double T) {
    const auto k1 = static_cast<std::size_t>(b.k1);
    const auto k2 = static_cast<std::size_t>(b.k2);
    EvolvedState s;
    s.T = T;
    s.k1 = b.k1;
    s.k2 = b.k2;
    s.psi_plus = Matrix<cplx>(b.dim1 + k1, b.dim2 + k2);
    s.psi_minus = Matrix<cplx>(b.dim1 + k1, b.dim2 + k2);
    const cplx minus_i{0.0, -1.0};
    for (std::size_t n = 0; n < b.dim1; ++n) {
        for (std::size_t m = 0; m < b.dim2; ++m) {
            const std::size_t i = n * b.dim2 + m;
            const double c = std::cos(T * b.rabi[i]);
            const double sn = std::sin(T * b.rabi[i]);
            s.psi_plus(n, m + k2) = b.excited0[i] * c + minus_i * b.ground0[i] * sn;
            s.psi_minus(n + k1, m) = b.ground0[i] * c + minus_i * b.excited0[i] * sn;
        }
    }
    for (std::size_t n = 0; n < b.dim1; ++n)
        for (std::size_t m = 0; m < k2; ++m) s.psi_plus(n, m) = b.frozen_plus(n, m);
    for (std::size_t n = 0; n < k1; ++n)
        for (std::size_t m = 0; m < b.dim2; ++m) s.psi_minus(n, m) = b.frozen_minus(n, m);
    return s;
}

inline EvolvedState evolve(const SystemConfig& cfg, double T) {
    if (!std::isfinite(T)) throw std::domain_error("evolve: T must be finite");
    return evolve(make_block_table(cfg), T);
}

/// <sigma_z> = sum |psi_plus|^2 - sum |psi_minus|^2.
inline double atomic_inversion(const EvolvedState& s) noexcept {
    double acc = 0.0;
    for (const auto& a : s.psi_plus.flat()) acc += std::norm(a);
    for (const auto& a : s.psi_minus.flat()) acc -= std::norm(a);
    return acc;
}

/// Closed-form inversion sum over blocks without materializing states:
///   sum (|a|^2 - |b|^2) cos(2 T Lambda) - 2 Im(a b*) sin(2 T Lambda) + frozen.
/// For real amplitudes this is the familiar double sum with the sin(phi) sin(2 varphi)
/// cross term.
inline TimeSeries inversion_series(const SystemConfig& cfg, std::span<const double> t_grid) {
    if (t_grid.empty()) throw std::domain_error("inversion_series: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (t_grid[i] < t_grid[i - 1]) throw std::domain_error("inversion_series: time grid must be sorted");
    }
    const BlockTable b = make_block_table(cfg);
    std::vector<double> diag(b.rabi.size());
    std::vector<double> cross(b.rabi.size());
    for (std::size_t i = 0; i < b.rabi.size(); ++i) {
        diag[i] = std::norm(b.excited0[i]) - std::norm(b.ground0[i]);
        cross[i] = -2.0 * std::imag(b.excited0[i] * std::conj(b.ground0[i]));
    }
    double frozen = 0.0;
    for (const auto& a : b.frozen_plus.flat()) frozen += std::norm(a);
    for (const auto& a : b.frozen_minus.flat()) frozen -= std::norm(a);

    TimeSeries out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.values.reserve(t_grid.size());
    for (double T : t_grid) {
        double acc = frozen;
        for (std::size_t i = 0; i < b.rabi.size(); ++i) {
            const double arg = 2.0 * T * b.rabi[i];
            acc += diag[i] * std::cos(arg) + cross[i] * std::sin(arg);
        }
        out.values.push_back(acc);
    }
    return out;
}

struct PhotonMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double mean_sq1 = 0.0;
    double mean_sq2 = 0.0;
    double cross = 0.0;

    double var1() const noexcept { return mean_sq1 - mean1 * mean1; }
    double var2() const noexcept { return mean_sq2 - mean2 * mean2; }
    double covariance() const noexcept { return cross - mean1 * mean2; }
    double var_sum() const noexcept { return var1() + var2() + 2.0 * covariance(); }
    double var_diff() const noexcept { return var1() + var2() - 2.0 * covariance(); }
};

inline PhotonMoments photon_moments(const EvolvedState& s) noexcept {
    PhotonMoments pm;
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        for (std::size_t n1 = 0; n1 < branch->rows(); ++n1) {
            for (std::size_t n2 = 0; n2 < branch->cols(); ++n2) {
                const double w = std::norm((*branch)(n1, n2));
                const double a = static_cast<double>(n1);
                const double c = static_cast<double>(n2);
                pm.mean1 += w * a;
                pm.mean2 += w * c;
                pm.mean_sq1 += w * a * a;
                pm.mean_sq2 += w * c * c;
                pm.cross += w * a * c;
            }
        }
    }
    return pm;
}

/// <n1 + n2 + (k1 - k2) |+><+|>, conserved by every block.
inline double excitation_number(const EvolvedState& s) noexcept {
    const PhotonMoments pm = photon_moments(s);
    double excited = 0.0;
    for (const auto& a : s.psi_plus.flat()) excited += std::norm(a);
    return pm.mean1 + pm.mean2 + static_cast<double>(s.k1 - s.k2) * excited;
}

}  // namespace tmjcm
