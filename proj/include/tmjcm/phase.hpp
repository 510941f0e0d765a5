#pragma once

// Pegg-Barnett phase observables of the reduced two-mode field state in the
// continuum limit. Tracing out the atom leaves an incoherent sum of the two
// atomic branches, so every distribution is a sum of |Fourier transform|^2 of
// the branch amplitude arrays:
//
//   Phi_b(t1, t2) = sum_{n1,n2} psi_b[n1][n2] exp(-i n1 t1 - i n2 t2)
//   P(t1, t2)     = (|Phi_+|^2 + |Phi_-|^2) / (4 pi^2)
//
// on the phase window [-pi, pi). Moments use the exact Fourier integrals
//   (1/2pi) int t   e^{ikt} dt = -i (-1)^k / k
//   (1/2pi) int t^2 e^{ikt} dt =  2 (-1)^k / k^2      (k != 0)
// so no quadrature error enters the production path.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tmjcm/dynamics.hpp"
#include "tmjcm/numerics.hpp"

namespace tmjcm {

enum class Mode { first = 1, second = 2 };

struct PhaseDistribution1D {
    PeriodicGrid grid;
    std::vector<double> values;

    double integral() const { return periodic_integral(values, grid); }
};

struct PhaseDistribution2D {
    PeriodicGrid grid1;
    PeriodicGrid grid2;
    Matrix<double> values;  ///< values(i1, i2) = P(grid1[i1], grid2[i2])

    double integral() const {
        double acc = 0.0;
        for (double v : values.flat()) acc += v;
        return acc * grid1.step() * grid2.step();
    }

    /// Rectangle-rule integration over the other axis.
    PhaseDistribution1D integrate_out(Mode keep) const {
        if (keep == Mode::first) {
            PhaseDistribution1D out{grid1, std::vector<double>(grid1.count(), 0.0)};
            for (std::size_t i = 0; i < values.rows(); ++i) {
                double acc = 0.0;
                for (double v : values.row(i)) acc += v;
                out.values[i] = acc * grid2.step();
            }
            return out;
        }
        PhaseDistribution1D out{grid2, std::vector<double>(grid2.count(), 0.0)};
        for (std::size_t i = 0; i < values.rows(); ++i) {
            const auto r = values.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) out.values[j] += r[j];
        }
        for (double& v : out.values) v *= grid1.step();
        return out;
    }
};

struct BranchTransforms {
    Matrix<cplx> plus;
    Matrix<cplx> minus;
};

namespace detail {

inline void require_resolution(const EvolvedState& s, std::size_t count1, std::size_t count2) {
    if (count1 <= s.extent1() || count2 <= s.extent2()) {
        throw std::domain_error("phase grid too coarse: need more than " + std::to_string(s.extent1()) + " x " +
                                std::to_string(s.extent2()) + " points, got " + std::to_string(count1) + " x " +
                                std::to_string(count2));
    }
}

inline Matrix<cplx> transform_branch(const Matrix<cplx>& psi, const PeriodicGrid& g1, const PeriodicGrid& g2) {
    const std::size_t d1 = psi.rows();
    const std::size_t d2 = psi.cols();
    // Axis 1 first: partial(g, n2) for every column.
    Matrix<cplx> partial(g1.count(), d2);
    std::vector<cplx> column(d1);
    std::vector<cplx> out1(g1.count());
    for (std::size_t n2 = 0; n2 < d2; ++n2) {
        for (std::size_t n1 = 0; n1 < d1; ++n1) column[n1] = psi(n1, n2);
        evaluate_on_grid(column, g1, out1);
        for (std::size_t g = 0; g < g1.count(); ++g) partial(g, n2) = out1[g];
    }
    Matrix<cplx> full(g1.count(), g2.count());
    for (std::size_t g = 0; g < g1.count(); ++g) evaluate_on_grid(partial.row(g), g2, full.row(g));
    return full;
}

/// (1/2pi) int_{-pi}^{pi} t^power e^{i k t} dt for power in {0, 1, 2}; the first
/// power is returned without its -i factor (it is purely imaginary).
inline double fourier_weight(int power, long k) {
    if (power == 0) return k == 0 ? 1.0 : 0.0;
    const double kk = static_cast<double>(k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (power == 1) return k == 0 ? 0.0 : sign / kk;
    return k == 0 ? pi * pi / 3.0 : 2.0 * sign / (kk * kk);
}

/// Toeplitz matrix W[n'][n] = fourier_weight(power, n' - n), d x d.
inline Matrix<double> fourier_toeplitz(int power, std::size_t d) {
    Matrix<double> w(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            w(a, b) = fourier_weight(power, static_cast<long>(a) - static_cast<long>(b));
    return w;
}

/// out = W psi (W acts on the mode-1 index).
inline Matrix<cplx> apply_left(const Matrix<double>& w, const Matrix<cplx>& psi) {
    Matrix<cplx> out(psi.rows(), psi.cols());
    for (std::size_t a = 0; a < psi.rows(); ++a) {
        auto dst = out.row(a);
        for (std::size_t b = 0; b < psi.rows(); ++b) {
            const double c = w(a, b);
            if (c == 0.0) continue;
            const auto src = psi.row(b);
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += c * src[j];
        }
    }
    return out;
}

/// out = psi W^T (W acts on the mode-2 index).
inline Matrix<cplx> apply_right(const Matrix<cplx>& psi, const Matrix<double>& w) {
    Matrix<cplx> out(psi.rows(), psi.cols());
    for (std::size_t i = 0; i < psi.rows(); ++i) {
        const auto src = psi.row(i);
        auto dst = out.row(i);
        for (std::size_t a = 0; a < psi.cols(); ++a) {
            const auto wr = w.row(a);
            double re = 0.0;
            double im = 0.0;
            for (std::size_t b = 0; b < src.size(); ++b) {
                re += wr[b] * src[b].real();
                im += wr[b] * src[b].imag();
            }
            dst[a] = {re, im};
        }
    }
    return out;
}

/// sum conj(x) . y
inline cplx inner(const Matrix<cplx>& x, const Matrix<cplx>& y) {
    cplx acc{};
    const auto xs = x.flat();
    const auto ys = y.flat();
    for (std::size_t i = 0; i < xs.size(); ++i) acc += std::conj(xs[i]) * ys[i];
    return acc;
}

}  // namespace detail

inline BranchTransforms branch_phase_transform(const EvolvedState& s, const PeriodicGrid& grid1,
                                               const PeriodicGrid& grid2) {
    detail::require_resolution(s, grid1.count(), grid2.count());
    return {detail::transform_branch(s.psi_plus, grid1, grid2), detail::transform_branch(s.psi_minus, grid1, grid2)};
}

inline PhaseDistribution2D joint_distribution(const EvolvedState& s, const PeriodicGrid& grid1,
                                              const PeriodicGrid& grid2) {
    const BranchTransforms t = branch_phase_transform(s, grid1, grid2);
    PhaseDistribution2D out{grid1, grid2, Matrix<double>(grid1.count(), grid2.count())};
    const double scale = 1.0 / (4.0 * pi * pi);
    const auto p = t.plus.flat();
    const auto m = t.minus.flat();
    auto v = out.values.flat();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * (std::norm(p[i]) + std::norm(m[i]));
    return out;
}

inline PhaseDistribution1D marginal_distribution(const EvolvedState& s, Mode mode, const PeriodicGrid& grid) {
    const std::size_t along = mode == Mode::first ? s.extent1() : s.extent2();
    const std::size_t other = mode == Mode::first ? s.extent2() : s.extent1();
    if (grid.count() <= along) detail::require_resolution(s, grid.count(), grid.count());
    PhaseDistribution1D out{grid, std::vector<double>(grid.count(), 0.0)};
    std::vector<cplx> coeffs(along);
    std::vector<cplx> values(grid.count());
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        for (std::size_t j = 0; j < other; ++j) {
            for (std::size_t i = 0; i < along; ++i)
                coeffs[i] = mode == Mode::first ? (*branch)(i, j) : (*branch)(j, i);
            evaluate_on_grid(coeffs, grid, values);
            for (std::size_t g = 0; g < grid.count(); ++g) out.values[g] += std::norm(values[g]);
        }
    }
    for (double& v : out.values) v /= two_pi;
    return out;
}

struct PhaseMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double mean_sq1 = 0.0;
    double mean_sq2 = 0.0;
    double cross = 0.0;
};

/// Phase moments from exact Fourier integrals of the branch amplitudes.
inline PhaseMoments phase_moments(const EvolvedState& s) {
    const std::size_t d1 = s.extent1();
    const std::size_t d2 = s.extent2();
    const auto lin1 = detail::fourier_toeplitz(1, d1);
    const auto sq1 = detail::fourier_toeplitz(2, d1);
    const auto lin2 = detail::fourier_toeplitz(1, d2);
    const auto sq2 = detail::fourier_toeplitz(2, d2);
    PhaseMoments pm;
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        const auto a1 = detail::apply_left(lin1, *branch);
        const auto a2 = detail::apply_right(*branch, lin2);
        // The linear weights carry a factor -i each.
        pm.mean1 += std::imag(detail::inner(*branch, a1));
        pm.mean2 += std::imag(detail::inner(*branch, a2));
        pm.mean_sq1 += std::real(detail::inner(*branch, detail::apply_left(sq1, *branch)));
        pm.mean_sq2 += std::real(detail::inner(*branch, detail::apply_right(*branch, sq2)));
        pm.cross -= std::real(detail::inner(*branch, detail::apply_right(a1, lin2)));
    }
    return pm;
}

/// Mean and mean square of one mode's phase only; O(d^3) with a single Toeplitz pass
/// per power, used for long variance sweeps.
inline std::pair<double, double> single_mode_phase_moments(const EvolvedState& s, Mode mode) {
    const std::size_t d = mode == Mode::first ? s.extent1() : s.extent2();
    const auto lin = detail::fourier_toeplitz(1, d);
    const auto sq = detail::fourier_toeplitz(2, d);
    double mean = 0.0;
    double mean_sq = 0.0;
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        if (mode == Mode::first) {
            mean += std::imag(detail::inner(*branch, detail::apply_left(lin, *branch)));
            mean_sq += std::real(detail::inner(*branch, detail::apply_left(sq, *branch)));
        } else {
            mean += std::imag(detail::inner(*branch, detail::apply_right(*branch, lin)));
            mean_sq += std::real(detail::inner(*branch, detail::apply_right(*branch, sq)));
        }
    }
    return {mean, mean_sq};
}

inline double single_mode_phase_variance(const EvolvedState& s, Mode mode) {
    const auto [mean, mean_sq] = single_mode_phase_moments(s, mode);
    return mean_sq - mean * mean;
}

/// Independent route: Gauss-Legendre quadrature of t^l against the marginal and
/// joint distributions evaluated pointwise. The integrands are entire functions
/// of t, so the rule converges geometrically once `nodes` resolves the highest
/// Fourier frequency (about 2 * extent + 40 nodes suffice).
inline PhaseMoments phase_moments_quadrature(const EvolvedState& s, std::size_t nodes) {
    const QuadratureRule rule = gauss_legendre(nodes, -pi, pi);
    const std::size_t d1 = s.extent1();
    const std::size_t d2 = s.extent2();
    const std::size_t q = nodes;
    // e1(a, n1) = exp(-i n1 t_a)
    Matrix<cplx> e1(q, d1);
    Matrix<cplx> e2(q, d2);
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t n = 0; n < d1; ++n) e1(a, n) = std::polar(1.0, -static_cast<double>(n) * rule.nodes[a]);
        for (std::size_t n = 0; n < d2; ++n) e2(a, n) = std::polar(1.0, -static_cast<double>(n) * rule.nodes[a]);
    }
    Matrix<double> joint(q, q);
    std::vector<double> marg1(q, 0.0);
    std::vector<double> marg2(q, 0.0);
    for (const auto* branch : {&s.psi_plus, &s.psi_minus}) {
        // half1(a, n2) = sum_n1 psi[n1][n2] e1(a, n1)
        Matrix<cplx> half1(q, d2);
        for (std::size_t a = 0; a < q; ++a)
            for (std::size_t n1 = 0; n1 < d1; ++n1) {
                const cplx c = e1(a, n1);
                const auto src = branch->row(n1);
                auto dst = half1.row(a);
                for (std::size_t n2 = 0; n2 < d2; ++n2) dst[n2] += c * src[n2];
            }
        for (std::size_t a = 0; a < q; ++a) {
            for (std::size_t n2 = 0; n2 < d2; ++n2) marg1[a] += std::norm(half1(a, n2));
            for (std::size_t b = 0; b < q; ++b) {
                cplx acc{};
                for (std::size_t n2 = 0; n2 < d2; ++n2) acc += half1(a, n2) * e2(b, n2);
                joint(a, b) += std::norm(acc);
            }
        }
        for (std::size_t b = 0; b < q; ++b)
            for (std::size_t n1 = 0; n1 < d1; ++n1) {
                cplx acc{};
                for (std::size_t n2 = 0; n2 < d2; ++n2) acc += (*branch)(n1, n2) * e2(b, n2);
                marg2[b] += std::norm(acc);
            }
    }
    PhaseMoments pm;
    for (std::size_t a = 0; a < q; ++a) {
        const double t = rule.nodes[a];
        const double w = rule.weights[a];
        pm.mean1 += w * t * marg1[a] / two_pi;
        pm.mean_sq1 += w * t * t * marg1[a] / two_pi;
        pm.mean2 += w * t * marg2[a] / two_pi;
        pm.mean_sq2 += w * t * t * marg2[a] / two_pi;
        for (std::size_t b = 0; b < q; ++b)
            pm.cross += w * rule.weights[b] * t * rule.nodes[b] * joint(a, b) / (4.0 * pi * pi);
    }
    return pm;
}

struct PhaseVariances {
    double var1 = 0.0;
    double var2 = 0.0;
    double var_sum = 0.0;
    double var_diff = 0.0;
    double h12 = 0.0;
};

inline PhaseVariances phase_variances(const PhaseMoments& m) noexcept {
    PhaseVariances v;
    v.var1 = m.mean_sq1 - m.mean1 * m.mean1;
    v.var2 = m.mean_sq2 - m.mean2 * m.mean2;
    v.h12 = 2.0 * (m.cross - m.mean1 * m.mean2);
    v.var_sum = v.var1 + v.var2 + v.h12;
    v.var_diff = v.var1 + v.var2 - v.h12;
    return v;
}

inline PhaseVariances phase_variances(const EvolvedState& s) { return phase_variances(phase_moments(s)); }

}  // namespace tmjcm
