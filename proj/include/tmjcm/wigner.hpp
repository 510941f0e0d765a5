#pragma once

// Wigner functions of the field, in the normalization where one mode's value at
// the phase-space origin is (1/pi) <(-1)^n> and the two-mode value is
// (1/pi^2) <(-1)^(n1+n2)>. With this prefactor a single-mode Wigner function
// integrates to 1/2 over the complex plane.
//
// Points are coherent amplitudes beta: a coherent state |beta0> peaks at beta0.

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmjcm/dynamics.hpp"
#include "tmjcm/numerics.hpp"
#include "tmjcm/phase.hpp"

namespace tmjcm {

struct WignerOriginValues {
    double w1 = 0.0;
    double w2 = 0.0;
    double w_joint = 0.0;
};

inline WignerOriginValues wigner_origin(const EvolvedState& s) noexcept {
    double p1 = 0.0;
    double p2 = 0.0;
    double p12 = 0.0;
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        for (std::size_t n1 = 0; n1 < branch->rows(); ++n1) {
            const double s1 = (n1 % 2 == 0) ? 1.0 : -1.0;
            for (std::size_t n2 = 0; n2 < branch->cols(); ++n2) {
                const double s2 = (n2 % 2 == 0) ? 1.0 : -1.0;
                const double w = std::norm((*branch)(n1, n2));
                p1 += s1 * w;
                p2 += s2 * w;
                p12 += s1 * s2 * w;
            }
        }
    }
    return {p1 / pi, p2 / pi, p12 / (pi * pi)};
}

/// (1/pi) <a| D(beta) P D(beta)^dagger |b>, the Fock-basis Wigner kernel, as a
/// d x d Hermitian matrix. For a >= b:
///   (1/pi) (-1)^b sqrt(b!/a!) (2 beta)^(a-b) exp(-2|beta|^2) L_b^(a-b)(4|beta|^2).
inline Matrix<cplx> wigner_kernel(cplx beta, std::size_t d) {
    Matrix<cplx> k(d, d);
    const double r = std::abs(beta);
    const double x = 4.0 * r * r;
    const double theta = std::arg(beta);
    for (std::size_t off = 0; off < d; ++off) {
        if (off > 0 && r == 0.0) break;
        // L_b^off(x) for b = 0, 1, ... by upward recurrence in b.
        double prev = 0.0;
        double cur = 1.0;
        const double a = static_cast<double>(off);
        for (std::size_t b = 0; b + off < d; ++b) {
            if (b == 1) {
                prev = cur;
                cur = 1.0 + a - x;
            } else if (b > 1) {
                const double bb = static_cast<double>(b - 1);
                const double next = ((2.0 * bb + 1.0 + a - x) * cur - (bb + a) * prev) / (bb + 1.0);
                prev = cur;
                cur = next;
            }
            const std::size_t row = b + off;
            const double log_mag = -0.5 * log_factorial_ratio(row, b) +
                                   (off > 0 ? a * std::log(2.0 * r) : 0.0) - 0.5 * x;
            const double sign = (b % 2 == 0) ? 1.0 : -1.0;
            const cplx v = std::polar(sign * std::exp(log_mag) * cur / pi, a * theta);
            k(row, b) = v;
            k(b, row) = std::conj(v);
        }
    }
    return k;
}

/// Reduced density matrix of one mode, rho(a, b) = <a| rho_j |b>.
inline Matrix<cplx> reduced_density(const EvolvedState& s, Mode mode) {
    const std::size_t d = mode == Mode::first ? s.extent1() : s.extent2();
    const std::size_t other = mode == Mode::first ? s.extent2() : s.extent1();
    Matrix<cplx> rho(d, d);
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                cplx acc{};
                for (std::size_t o = 0; o < other; ++o) {
                    const cplx pa = mode == Mode::first ? (*branch)(a, o) : (*branch)(o, a);
                    const cplx pb = mode == Mode::first ? (*branch)(b, o) : (*branch)(o, b);
                    acc += pa * std::conj(pb);
                }
                rho(a, b) += acc;
            }
    }
    return rho;
}

/// Single-mode Wigner values W_j(beta) at each point.
inline std::vector<double> wigner_grid(const EvolvedState& s, Mode mode, std::span<const cplx> points) {
    if (points.empty()) throw std::domain_error("wigner_grid: empty point list");
    const Matrix<cplx> rho = reduced_density(s, mode);
    const std::size_t d = rho.rows();
    std::vector<double> out;
    out.reserve(points.size());
    for (const cplx beta : points) {
        const Matrix<cplx> k = wigner_kernel(beta, d);
        // W = Tr(rho K) = sum_{a,b} rho(b, a) K(a, b)
        cplx acc{};
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) acc += rho(b, a) * k(a, b);
        out.push_back(acc.real());
    }
    return out;
}

/// Two-mode Wigner values W(beta1, beta2) = sum_branch <psi| K1 (x) K2 |psi>.
inline std::vector<double> joint_wigner_grid(const EvolvedState& s, std::span<const std::array<cplx, 2>> points) {
    if (points.empty()) throw std::domain_error("joint_wigner_grid: empty point list");
    std::vector<double> out;
    out.reserve(points.size());
    const std::size_t d1 = s.extent1();
    const std::size_t d2 = s.extent2();
    for (const auto& p : points) {
        const Matrix<cplx> k1 = wigner_kernel(p[0], d1);
        const Matrix<cplx> k2 = wigner_kernel(p[1], d2);
        double acc = 0.0;
        for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
            // t = K1 psi, then u = t K2^T, result = sum conj(psi) u
            Matrix<cplx> t(d1, d2);
            for (std::size_t a = 0; a < d1; ++a)
                for (std::size_t b = 0; b < d1; ++b) {
                    const cplx c = k1(a, b);
                    const auto src = branch->row(b);
                    auto dst = t.row(a);
                    for (std::size_t j = 0; j < d2; ++j) dst[j] += c * src[j];
                }
            cplx sum{};
            for (std::size_t a = 0; a < d1; ++a)
                for (std::size_t c = 0; c < d2; ++c) {
                    cplx u{};
                    for (std::size_t e = 0; e < d2; ++e) u += t(a, e) * k2(c, e);
                    sum += std::conj((*branch)(a, c)) * u;
                }
            acc += sum.real();
        }
        out.push_back(acc);
    }
    return out;
}

/// Parity identities tying the origin Wigner values to the atomic inversion.
/// All of them assume the atom starts excited.
enum class OriginIdentity {
    none,
    even_cats_odd_transitions,   ///< eps=(1,1), k1,k2 odd: pi W1 = pi W2 = <sigma_z>, pi^2 W = 1
    even_cats_even_transitions,  ///< eps=(1,1), k1,k2 even: pi W1 = pi W2 = pi^2 W = 1
    even_cats_mixed_transitions, ///< eps=(1,1), one k odd: the odd mode tracks <sigma_z>, the other stays 1/pi
    coherent_odd_transitions,    ///< eps=(0,0), k1,k2 odd: W(0,T) = W1(0,0) W2(0,0), W1 follows (-1)^n-weighted inversion
};

inline const char* to_string(OriginIdentity id) noexcept {
    switch (id) {
        case OriginIdentity::none: return "none";
        case OriginIdentity::even_cats_odd_transitions: return "even_cats_odd_transitions";
        case OriginIdentity::even_cats_even_transitions: return "even_cats_even_transitions";
        case OriginIdentity::even_cats_mixed_transitions: return "even_cats_mixed_transitions";
        case OriginIdentity::coherent_odd_transitions: return "coherent_odd_transitions";
    }
    return "none";
}

inline OriginIdentity applicable_identity(const SystemConfig& cfg) noexcept {
    if (std::sin(cfg.varphi) != 0.0) return OriginIdentity::none;
    const bool odd1 = cfg.k1 % 2 == 1;
    const bool odd2 = cfg.k2 % 2 == 1;
    if (cfg.mode1.epsilon == 1 && cfg.mode2.epsilon == 1) {
        if (odd1 && odd2) return OriginIdentity::even_cats_odd_transitions;
        if (!odd1 && !odd2) return OriginIdentity::even_cats_even_transitions;
        return OriginIdentity::even_cats_mixed_transitions;
    }
    if (cfg.mode1.epsilon == 0 && cfg.mode2.epsilon == 0 && odd1 && odd2) {
        return OriginIdentity::coherent_odd_transitions;
    }
    return OriginIdentity::none;
}

struct IdentityResiduals {
    OriginIdentity identity = OriginIdentity::none;
    TimeSeries residuals;  ///< max component residual at each T; empty when identity == none

    bool applicable() const noexcept { return identity != OriginIdentity::none; }
    double max_residual() const noexcept {
        double m = 0.0;
        for (double v : residuals.values) m = std::max(m, v);
        return m;
    }
};

namespace detail {

/// (1/pi) sum C^2_{n,m+k2} cos(2 T Lambda + n pi) plus the stationary excited
/// amplitudes; the mode-1 origin value for coherent inputs and an excited atom.
inline double parity_weighted_inversion(const BlockTable& b, double T) {
    double acc = 0.0;
    for (std::size_t n = 0; n < b.dim1; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t m = 0; m < b.dim2; ++m) {
            const std::size_t i = n * b.dim2 + m;
            acc += sign * std::norm(b.excited0[i]) * std::cos(2.0 * T * b.rabi[i]);
        }
    }
    for (std::size_t n = 0; n < b.frozen_plus.rows(); ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t m = 0; m < b.frozen_plus.cols(); ++m) acc += sign * std::norm(b.frozen_plus(n, m));
    }
    return acc / pi;
}

}  // namespace detail

inline IdentityResiduals origin_inversion_identity(const SystemConfig& cfg, std::span<const double> t_grid) {
    IdentityResiduals out;
    out.identity = applicable_identity(cfg);
    if (!out.applicable()) return out;
    const BlockTable blocks = make_block_table(cfg);
    const WignerOriginValues initial = wigner_origin(evolve(blocks, 0.0));
    const bool odd1 = cfg.k1 % 2 == 1;
    for (double T : t_grid) {
        const EvolvedState s = evolve(blocks, T);
        const WignerOriginValues w = wigner_origin(s);
        const double sz = atomic_inversion(s);
        double r = 0.0;
        switch (out.identity) {
            case OriginIdentity::even_cats_odd_transitions:
                r = std::max({std::abs(pi * w.w1 - sz), std::abs(pi * w.w2 - sz), std::abs(pi * pi * w.w_joint - 1.0)});
                break;
            case OriginIdentity::even_cats_even_transitions:
                r = std::max({std::abs(pi * w.w1 - 1.0), std::abs(pi * w.w2 - 1.0), std::abs(pi * pi * w.w_joint - 1.0)});
                break;
            case OriginIdentity::even_cats_mixed_transitions: {
                const double tracking = odd1 ? w.w1 : w.w2;
                const double fixed = odd1 ? w.w2 : w.w1;
                r = std::max({std::abs(pi * tracking - sz), std::abs(pi * fixed - 1.0),
                              std::abs(pi * w.w_joint - tracking)});
                break;
            }
            case OriginIdentity::coherent_odd_transitions:
                r = std::max(std::abs(w.w_joint - initial.w1 * initial.w2),
                             std::abs(w.w1 - detail::parity_weighted_inversion(blocks, T)));
                break;
            case OriginIdentity::none: break;
        }
        out.residuals.times.push_back(T);
        out.residuals.values.push_back(r);
    }
    return out;
}

}  // namespace tmjcm
