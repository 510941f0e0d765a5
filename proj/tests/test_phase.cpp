#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tmjcm/phase.hpp"

using namespace tmjcm;

namespace {

EvolvedState random_state(std::size_t d1, std::size_t d2, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    EvolvedState s;
    s.k1 = 1;
    s.k2 = 1;
    s.psi_plus = Matrix<cplx>(d1, d2);
    s.psi_minus = Matrix<cplx>(d1, d2);
    for (auto& a : s.psi_plus.flat()) a = {nd(rng), nd(rng)};
    for (auto& a : s.psi_minus.flat()) a = {nd(rng), nd(rng)};
    const double n = std::sqrt(s.norm());
    for (auto& a : s.psi_plus.flat()) a /= n;
    for (auto& a : s.psi_minus.flat()) a /= n;
    return s;
}

// Four-index sum over both branches, evaluated at one point.
double joint_by_double_sum(const EvolvedState& s, double t1, double t2) {
    double acc = 0.0;
    for (const auto* b : {&s.psi_plus, &s.psi_minus}) {
        cplx sum{};
        for (std::size_t n1 = 0; n1 < b->rows(); ++n1)
            for (std::size_t n2 = 0; n2 < b->cols(); ++n2)
                for (std::size_t p1 = 0; p1 < b->rows(); ++p1)
                    for (std::size_t p2 = 0; p2 < b->cols(); ++p2) {
                        const double phase = -(double(n1) - double(p1)) * t1 - (double(n2) - double(p2)) * t2;
                        sum += (*b)(n1, n2) * std::conj((*b)(p1, p2)) * std::polar(1.0, phase);
                    }
        acc += sum.real();
    }
    return acc / (4.0 * pi * pi);
}

double max_reflection_asymmetry(const PhaseDistribution2D& p) {
    const std::size_t n1 = p.grid1.count();
    const std::size_t n2 = p.grid2.count();
    double m = 0.0;
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            m = std::max(m, std::abs(p.values(i, j) - p.values((n1 - i) % n1, (n2 - j) % n2)));
    return m;
}

}  // namespace

TEST(BranchTransform, SingleFockState) {
    EvolvedState s;
    s.psi_plus = Matrix<cplx>(3, 2);
    s.psi_minus = Matrix<cplx>(3, 2);
    s.psi_plus(1, 0) = 1.0;
    const PeriodicGrid g(16);
    const BranchTransforms t = branch_phase_transform(s, g, g);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            EXPECT_LT(std::abs(t.plus(i, j) - std::polar(1.0, -g.point(i))), 1e-14);
            EXPECT_EQ(t.minus(i, j), cplx{});
        }
}

TEST(BranchTransform, MatchesDirectLoop) {
    const EvolvedState s = random_state(4, 5, 3);
    const PeriodicGrid g1(16);
    const PeriodicGrid g2(24);
    const BranchTransforms t = branch_phase_transform(s, g1, g2);
    for (std::size_t i = 0; i < g1.count(); ++i)
        for (std::size_t j = 0; j < g2.count(); ++j) {
            cplx direct{};
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 5; ++b)
                    direct += s.psi_minus(a, b) * std::polar(1.0, -double(a) * g1.point(i) - double(b) * g2.point(j));
            EXPECT_LT(std::abs(t.minus(i, j) - direct), 1e-13);
        }
}

TEST(JointDistribution, MatchesFourIndexSum) {
    // Amplitudes written out from the block solution, independent of evolve().
    const SystemConfig c = make_config({std::polar(0.9, 0.4), 1}, {std::polar(0.7, -1.0), 0}, 1, 2, 0.6, 1.1);
    const double T = 1.7;
    EvolvedState s;
    s.psi_plus = Matrix<cplx>(c.dim1 + 1, c.dim2 + 2);
    s.psi_minus = Matrix<cplx>(c.dim1 + 1, c.dim2 + 2);
    const cplx i{0.0, 1.0};
    for (std::size_t n = 0; n < c.dim1; ++n)
        for (std::size_t m = 0; m < c.dim2; ++m) {
            const double lam = std::sqrt((n + 1.0) * (m + 1.0) * (m + 2.0));
            const cplx a = amplitude(c.mode1, n) * amplitude(c.mode2, m + 2) * std::cos(c.varphi);
            const cplx b = amplitude(c.mode1, n + 1) * amplitude(c.mode2, m) * std::exp(i * c.phi) * std::sin(c.varphi);
            s.psi_plus(n, m + 2) = a * std::cos(T * lam) - i * b * std::sin(T * lam);
            s.psi_minus(n + 1, m) = b * std::cos(T * lam) - i * a * std::sin(T * lam);
        }
    for (std::size_t n = 0; n < c.dim1; ++n)
        for (std::size_t m = 0; m < 2; ++m)
            s.psi_plus(n, m) = amplitude(c.mode1, n) * amplitude(c.mode2, m) * std::cos(c.varphi);
    for (std::size_t m = 0; m < c.dim2; ++m)
        s.psi_minus(0, m) = amplitude(c.mode1, 0) * amplitude(c.mode2, m) * std::exp(i * c.phi) * std::sin(c.varphi);

    const PeriodicGrid g(32);
    const PhaseDistribution2D p = joint_distribution(evolve(c, T), g, g);
    for (std::size_t a = 0; a < 32; a += 5)
        for (std::size_t b = 0; b < 32; b += 7)
            EXPECT_NEAR(p.values(a, b), joint_by_double_sum(s, g.point(a), g.point(b)), 1e-12) << a << " " << b;
}

TEST(JointDistribution, ExcitedAtomCosineForm) {
    // With the atom excited, P = (1/4pi^2) sum_{p,q} C_p C_q^* cos(T (L_p - L_q)) e^{-i (n_p - n_q) . theta}
    // over the excited-branch indices, with L = 0 for the stationary ones.
    const SystemConfig c = make_config({std::polar(1.0, 0.3), 0}, {std::polar(0.8, -0.6), 1}, 2, 1, 0.0, 0.9);
    const double T = 2.9;
    const std::size_t e1 = c.dim1;
    const std::size_t e2 = c.dim2 + 1;
    std::vector<cplx> coef;
    std::vector<double> lam;
    std::vector<std::pair<double, double>> idx;
    for (std::size_t n = 0; n < e1; ++n)
        for (std::size_t j = 0; j < e2; ++j) {
            coef.push_back(amplitude(c.mode1, n) * amplitude(c.mode2, j));
            lam.push_back(j >= 1 ? rabi_frequency(2, 1, n, j - 1) : 0.0);
            idx.emplace_back(double(n), double(j));
        }
    const PeriodicGrid g(64);
    const PhaseDistribution2D p = joint_distribution(evolve(c, T), g, g);
    for (std::size_t a : {0ul, 13ul, 40ul})
        for (std::size_t b : {5ul, 32ul, 61ul}) {
            cplx acc{};
            for (std::size_t u = 0; u < coef.size(); ++u)
                for (std::size_t v = 0; v < coef.size(); ++v) {
                    const double phase = -(idx[u].first - idx[v].first) * g.point(a) -
                                         (idx[u].second - idx[v].second) * g.point(b);
                    acc += coef[u] * std::conj(coef[v]) * std::cos(T * (lam[u] - lam[v])) * std::polar(1.0, phase);
                }
            EXPECT_NEAR(p.values(a, b), acc.real() / (4.0 * pi * pi), 1e-12);
        }
}

TEST(JointDistribution, NormalizedAndConsistentWithMarginals) {
    const SystemConfig c = make_config({std::polar(1.5, 0.2), 1}, {{1.0, 0.0}, -1}, 1, 1, 0.8, 0.5);
    const EvolvedState s = evolve(c, 4.4);
    const PeriodicGrid g(64);
    const PhaseDistribution2D p = joint_distribution(s, g, g);
    EXPECT_NEAR(p.integral(), 1.0, 1e-12);
    for (double v : p.values.flat()) EXPECT_GE(v, 0.0);
    for (Mode m : {Mode::first, Mode::second}) {
        const PhaseDistribution1D direct = marginal_distribution(s, m, g);
        const PhaseDistribution1D folded = p.integrate_out(m);
        EXPECT_NEAR(direct.integral(), 1.0, 1e-12);
        for (std::size_t i = 0; i < g.count(); ++i) EXPECT_NEAR(direct.values[i], folded.values[i], 1e-12);
    }
}

TEST(JointDistribution, ReflectionSymmetryForRealInputs) {
    const PeriodicGrid g(64);
    for (double varphi : {0.0, pi / 2.0}) {
        const SystemConfig c = make_config({1.5, 1}, {1.2, 0}, 1, 2, varphi, 0.0);
        for (double T : {0.0, 1.3, 5.0})
            EXPECT_LT(max_reflection_asymmetry(joint_distribution(evolve(c, T), g, g)), 1e-13) << varphi << " " << T;
    }
    // A superposed atom with a real relative amplitude breaks the symmetry.
    const SystemConfig mixed = make_config({1.5, 1}, {1.2, 0}, 1, 2, pi / 4.0, 0.0);
    EXPECT_GT(max_reflection_asymmetry(joint_distribution(evolve(mixed, 1.3), g, g)), 1e-4);
}

TEST(JointDistribution, RejectsCoarseGrid) {
    const EvolvedState s = evolve(make_config({1.0, 0}, {1.0, 0}, 1, 1), 1.0);
    EXPECT_THROW(joint_distribution(s, PeriodicGrid(16), PeriodicGrid(64)), std::domain_error);
    EXPECT_THROW(marginal_distribution(s, Mode::second, PeriodicGrid(8)), std::domain_error);
}

TEST(PhaseMoments, VacuumIsUniform) {
    const EvolvedState s = evolve(make_config({0.0, 0}, {0.0, 0}, 1, 1), 3.0);
    const PhaseVariances v = phase_variances(s);
    EXPECT_NEAR(v.var1, pi * pi / 3.0, 1e-14);
    EXPECT_NEAR(v.var2, pi * pi / 3.0, 1e-14);
    EXPECT_NEAR(v.h12, 0.0, 1e-14);
    EXPECT_NEAR(v.var_sum, 2.0 * pi * pi / 3.0, 1e-13);
}

TEST(PhaseMoments, ProductStateHasNoCorrelation) {
    const SystemConfig c = make_config({std::polar(2.0, 0.5), 0}, {std::polar(1.5, -0.3), 1}, 1, 1);
    const PhaseVariances v = phase_variances(evolve(c, 0.0));
    EXPECT_NEAR(v.h12, 0.0, 1e-12);
    EXPECT_NEAR(v.var_sum, v.var_diff, 1e-12);
}

TEST(PhaseMoments, RealInputsHaveZeroMean) {
    const SystemConfig c = make_config({2.0, 1}, {1.5, 0}, 1, 2);
    for (double T : {0.0, 2.0, 7.5}) {
        const PhaseMoments m = phase_moments(evolve(c, T));
        EXPECT_NEAR(m.mean1, 0.0, 1e-13);
        EXPECT_NEAR(m.mean2, 0.0, 1e-13);
    }
}

TEST(PhaseMoments, AnalyticMatchesQuadrature) {
    for (const auto& c : {make_config({std::polar(1.5, 0.7), 0}, {std::polar(1.0, -1.2), 1}, 1, 1, 0.4, 1.0),
                          make_config({std::polar(2.0, -0.4), -1}, {std::polar(1.2, 2.0), 0}, 2, 1, 1.1, 0.2)}) {
        for (double T : {0.0, 1.9, 6.3}) {
            const EvolvedState s = evolve(c, T);
            const std::size_t nodes = 2 * std::max(s.extent1(), s.extent2()) + 40;
            const PhaseMoments a = phase_moments(s);
            const PhaseMoments q = phase_moments_quadrature(s, nodes);
            EXPECT_NEAR(a.mean1, q.mean1, 1e-9);
            EXPECT_NEAR(a.mean2, q.mean2, 1e-9);
            EXPECT_NEAR(a.mean_sq1, q.mean_sq1, 1e-9);
            EXPECT_NEAR(a.mean_sq2, q.mean_sq2, 1e-9);
            EXPECT_NEAR(a.cross, q.cross, 1e-9);
        }
    }
}

TEST(PhaseMoments, SingleModeRouteAgrees) {
    const SystemConfig c = make_config({std::polar(1.7, 0.9), 1}, {std::polar(1.1, 0.1), 0}, 1, 2, 0.3, 0.7);
    const EvolvedState s = evolve(c, 3.7);
    const PhaseVariances v = phase_variances(s);
    EXPECT_NEAR(single_mode_phase_variance(s, Mode::first), v.var1, 1e-13);
    EXPECT_NEAR(single_mode_phase_variance(s, Mode::second), v.var2, 1e-13);
}

TEST(PhaseMoments, CoherentPhaseNarrowsWithIntensity) {
    const double weak = phase_variances(evolve(make_config({1.0, 0}, {1.0, 0}, 1, 1), 0.0)).var1;
    const double strong = phase_variances(evolve(make_config({4.0, 0}, {1.0, 0}, 1, 1), 0.0)).var1;
    EXPECT_LT(strong, weak);
    // Large amplitude: var ~ 1 / (4 |alpha|^2).
    EXPECT_NEAR(strong, 1.0 / 64.0, 2e-3);
}
