#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "tmjcm/oracle.hpp"

using namespace tmjcm;
using namespace tmjcm::oracle;

TEST(Hamiltonian, SmallestCoupledPair) {
    const Space sp{2, 2, 1, 1};
    const SparseMatrix h = build_hamiltonian(sp);
    EXPECT_EQ(h.nonzeros(), 2u);
    EXPECT_EQ(h.at(sp.index(-1, 1, 0), sp.index(+1, 0, 1)), cplx(1.0, 0.0));
    EXPECT_EQ(h.at(sp.index(+1, 0, 1), sp.index(-1, 1, 0)), cplx(1.0, 0.0));
    EXPECT_DOUBLE_EQ(max_coupling(h), 1.0);
}

TEST(Hamiltonian, Hermitian) {
    const Space sp{6, 5, 2, 1};
    const SparseMatrix h = build_hamiltonian(sp);
    for (std::size_t r = 0; r < h.size(); ++r)
        for (std::size_t c = 0; c < h.size(); ++c) EXPECT_EQ(h.at(r, c), std::conj(h.at(c, r)));
}

TEST(Hamiltonian, RowNormsAreRabiFrequencies) {
    for (const Space& sp : {Space{7, 6, 1, 1}, Space{8, 5, 2, 1}, Space{6, 9, 2, 2}, Space{4, 7, 0, 1}}) {
        const SparseMatrix h = build_hamiltonian(sp);
        for (std::size_t n = 0; n + sp.k1 < sp.d1; ++n)
            for (std::size_t m = 0; m + sp.k2 < sp.d2; ++m) {
                double sq = 0.0;
                h.for_each_in_row(sp.index(+1, n, m + sp.k2), [&](std::size_t, cplx v) { sq += std::norm(v); });
                const double lam = rabi_frequency(sp.k1, sp.k2, n, m);
                EXPECT_NEAR(sq, lam * lam, 1e-10 * lam * lam);
            }
        // Dark rows are empty.
        for (std::size_t n = 0; n < sp.d1; ++n)
            for (std::size_t m = 0; m < static_cast<std::size_t>(sp.k2); ++m) {
                std::size_t count = 0;
                h.for_each_in_row(sp.index(+1, n, m), [&](std::size_t, cplx) { ++count; });
                EXPECT_EQ(count, 0u);
            }
    }
}

TEST(InitialState, MatchesAnalyticAtZero) {
    const SystemConfig c = make_config({std::polar(2.0, 0.3), 1}, {std::polar(1.5, -0.9), -1}, 2, 1, 0.7, 1.9);
    const DenseStateVector psi = integrate(c, 0.0);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-14);
    EXPECT_NEAR(fidelity(psi, to_dense(evolve(c, 0.0))), 1.0, 1e-12);
}

TEST(CatAmplitudes, Normalized) {
    const auto c = cat_amplitudes({3.0, 0.0}, -1, 40);
    double n = 0.0;
    for (const auto& a : c) n += std::norm(a);
    EXPECT_NEAR(n, 1.0, 1e-14);
    EXPECT_EQ(c[0], cplx{});
    EXPECT_THROW(cat_amplitudes({0.0, 0.0}, -1, 8), std::domain_error);
}

TEST(Integrate, SingleBlockRotation) {
    const Space sp{2, 2, 1, 1};
    const SparseMatrix h = build_hamiltonian(sp);
    DenseStateVector psi{sp, std::vector<cplx>(sp.size())};
    psi.amplitudes[sp.index(+1, 0, 1)] = 1.0;
    const DenseStateVector out = Propagator(h, pi / 2.0, 1e-3).apply(psi);
    EXPECT_LT(std::abs(out.amplitudes[sp.index(+1, 0, 1)]), 1e-12);
    EXPECT_LT(std::abs(out.amplitudes[sp.index(-1, 1, 0)] - cplx(0.0, -1.0)), 1e-12);
}

TEST(Integrate, StepLimit) {
    const SparseMatrix h = build_hamiltonian(Space{10, 10, 1, 1});
    EXPECT_THROW(Propagator(h, 1.0, 0.5), std::domain_error);
    EXPECT_THROW(Propagator(h, 1.0, 0.0), std::domain_error);
    EXPECT_THROW(Propagator(h, std::nan(""), 1e-3), std::domain_error);
    EXPECT_NO_THROW(Propagator(h, 1.0, default_step(h)));
    EXPECT_EQ(Propagator(h, 0.0, default_step(h)).steps(), 0u);
}

TEST(Integrate, SquaringMatchesStepwise) {
    const SystemConfig c = make_config({{1.0, 0.2}, 0}, {{0.7, 0.0}, 1}, 2, 1, 0.5, 0.3);
    const SparseMatrix h = build_hamiltonian(c);
    const double step = default_step(h);
    const DenseStateVector a = Propagator(h, 2.5, step).apply(initial_state(c));
    const DenseStateVector b = integrate_stepwise(h, initial_state(c), 2.5, step);
    double dev = 0.0;
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) dev = std::max(dev, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    EXPECT_LT(dev, 1e-12);
}

TEST(Integrate, ConservesNormEnergyAndExcitation) {
    const SystemConfig c = make_config({{1.2, 0.0}, 1}, {{0.9, 0.4}, 0}, 1, 2, 0.9, 0.6);
    const SparseMatrix h = build_hamiltonian(c);
    const DenseStateVector psi0 = initial_state(c);
    const double e0 = energy(h, psi0);
    const double x0 = excitation(psi0);
    double worst_norm = 0.0;
    double worst_energy = 0.0;
    double worst_excitation = 0.0;
    integrate_stepwise(h, psi0, 5.0, default_step(h), [&](double, const DenseStateVector& v) {
        worst_norm = std::max(worst_norm, std::abs(v.norm() - 1.0));
        worst_energy = std::max(worst_energy, std::abs(energy(h, v) - e0));
        worst_excitation = std::max(worst_excitation, std::abs(excitation(v) - x0));
    });
    EXPECT_LT(worst_norm, 1e-9);
    EXPECT_LT(worst_energy, 1e-9);
    EXPECT_LT(worst_excitation, 1e-9);
}

TEST(Integrate, AgreesWithAnalyticEvolution) {
    const SystemConfig c = make_config({3.0, 1}, {3.0, 1}, 1, 1);
    const DenseStateVector ref = integrate(c, 5.0);
    EXPECT_GT(fidelity(ref, to_dense(evolve(c, 5.0))), 1.0 - 1e-10);
    EXPECT_NEAR(excitation(ref), excitation_number(evolve(c, 5.0)), 1e-8);
}

TEST(Integrate, DetectsAnalyticSignError) {
    // A wrong sign on the off-diagonal term is visible to the oracle.
    const SystemConfig c = make_config({1.0, 0}, {1.0, 0}, 1, 1, pi / 4.0, 0.0);
    EvolvedState bad = evolve(c, 1.0);
    const BlockTable b = make_block_table(c);
    for (std::size_t n = 0; n < c.dim1; ++n)
        for (std::size_t m = 0; m < c.dim2; ++m) {
            const std::size_t i = n * b.dim2 + m;
            bad.psi_minus(n + 1, m) = b.ground0[i] * std::cos(b.rabi[i]) + cplx{0.0, 1.0} * b.excited0[i] * std::sin(b.rabi[i]);
        }
    EXPECT_LT(fidelity(integrate(c, 1.0), to_dense(bad)), 0.99);
}

TEST(Fidelity, Properties) {
    const Space sp{3, 3, 1, 1};
    std::mt19937 rng(5);
    std::normal_distribution<double> nd;
    DenseStateVector a{sp, std::vector<cplx>(sp.size())};
    for (auto& v : a.amplitudes) v = {nd(rng), nd(rng)};
    DenseStateVector b = a;
    for (auto& v : b.amplitudes) v *= std::polar(2.5, 0.8);
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-14);
    DenseStateVector c{Space{2, 2, 1, 1}, std::vector<cplx>(8)};
    EXPECT_THROW(fidelity(a, c), std::domain_error);
}
