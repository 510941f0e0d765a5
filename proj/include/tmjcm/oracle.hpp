#pragma once

// Brute-force reference for the analytic evolution: the interaction Hamiltonian
// is assembled on the truncated product space from single-photon ladder steps
// and the Schrodinger equation i dpsi/dT = (H_I/g) psi is integrated with
// fixed-step classical Runge-Kutta. Nothing here uses the block structure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "tmjcm/dynamics.hpp"
#include "tmjcm/numerics.hpp"

namespace tmjcm::oracle {

/// Basis |atom, n1, n2>, atom-major (+ first), then n1, then n2.
struct Space {
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    int k1 = 0;
    int k2 = 0;

    std::size_t size() const noexcept { return 2 * d1 * d2; }
    std::size_t index(int atom, std::size_t n1, std::size_t n2) const noexcept {
        return (atom > 0 ? 0 : d1 * d2) + n1 * d2 + n2;
    }
};

/// The oracle works on exactly the extents the analytic solution fills.
inline Space space_for(const SystemConfig& cfg) {
    validate(cfg);
    return {cfg.dim1 + static_cast<std::size_t>(cfg.k1), cfg.dim2 + static_cast<std::size_t>(cfg.k2), cfg.k1, cfg.k2};
}

struct DenseStateVector {
    Space space;
    std::vector<cplx> amplitudes;

    double norm() const noexcept {
        double acc = 0.0;
        for (const auto& a : amplitudes) acc += std::norm(a);
        return acc;
    }
};

/// Compressed-row sparse matrix.
class SparseMatrix {
public:
    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t n) : n_(n), row_ptr_(n + 1, 0) {}

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m.col_.push_back(i);
            m.val_.push_back(1.0);
            m.row_ptr_[i + 1] = i + 1;
        }
        return m;
    }

    /// Duplicate (row, col) entries are summed; exact zeros are kept out.
    static SparseMatrix from_entries(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, cplx>& entries) {
        SparseMatrix m(n);
        for (const auto& [rc, v] : entries) {
            if (v == cplx{}) continue;
            m.col_.push_back(rc.second);
            m.val_.push_back(v);
            ++m.row_ptr_[rc.first + 1];
        }
        for (std::size_t i = 0; i < n; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
        return m;
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t nonzeros() const noexcept { return val_.size(); }

    cplx at(std::size_t r, std::size_t c) const noexcept {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
            if (col_[p] == c) return val_[p];
        return {};
    }

    template <class F>
    void for_each_in_row(std::size_t r, F&& f) const {
        for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) f(col_[p], val_[p]);
    }

    void apply(std::span<const cplx> x, std::span<cplx> y) const {
        if (x.size() != n_ || y.size() != n_) throw std::domain_error("SparseMatrix::apply: size mismatch");
        for (std::size_t r = 0; r < n_; ++r) {
            cplx acc{};
            for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += val_[p] * x[col_[p]];
            y[r] = acc;
        }
    }

    std::vector<cplx> apply(std::span<const cplx> x) const {
        std::vector<cplx> y(n_);
        apply(x, y);
        return y;
    }

    SparseMatrix scaled(cplx s) const {
        SparseMatrix m = *this;
        for (auto& v : m.val_) v *= s;
        return m;
    }

    /// this + s * I
    SparseMatrix plus_identity(cplx s) const {
        std::map<std::pair<std::size_t, std::size_t>, cplx> e;
        for (std::size_t r = 0; r < n_; ++r) {
            e[{r, r}] += s;
            for_each_in_row(r, [&](std::size_t c, cplx v) { e[{r, c}] += v; });
        }
        return from_entries(n_, e);
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.n_ != b.n_) throw std::domain_error("SparseMatrix product: size mismatch");
        SparseMatrix m(a.n_);
        std::vector<cplx> acc(a.n_);
        std::vector<std::uint8_t> used(a.n_, 0);
        std::vector<std::size_t> touched;
        for (std::size_t r = 0; r < a.n_; ++r) {
            touched.clear();
            for (std::size_t p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
                const std::size_t k = a.col_[p];
                for (std::size_t q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
                    const std::size_t c = b.col_[q];
                    if (!used[c]) {
                        used[c] = 1;
                        touched.push_back(c);
                    }
                    acc[c] += a.val_[p] * b.val_[q];
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::size_t c : touched) {
                if (acc[c] != cplx{}) {
                    m.col_.push_back(c);
                    m.val_.push_back(acc[c]);
                }
                acc[c] = {};
                used[c] = 0;
            }
            m.row_ptr_[r + 1] = m.val_.size();
        }
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_;
    std::vector<cplx> val_;
};

namespace detail {

/// One photon created or annihilated in a truncated ladder, tracking sqrt(n) factors.
/// Returns false when the ket leaves the space or is annihilated.
inline bool ladder_step(std::size_t& n, double& amp, bool create, std::size_t d) {
    if (create) {
        if (n + 1 >= d) return false;
        ++n;
        amp *= std::sqrt(static_cast<double>(n));
    } else {
        if (n == 0) return false;
        amp *= std::sqrt(static_cast<double>(n));
        --n;
    }
    return true;
}

}  // namespace detail

/// H_I/g = sigma_- (a1^dagger)^k1 a2^k2 + h.c. on the given space.
inline SparseMatrix build_hamiltonian(const Space& sp) {
    if (sp.d1 == 0 || sp.d2 == 0) throw std::domain_error("build_hamiltonian: empty space");
    std::map<std::pair<std::size_t, std::size_t>, cplx> e;
    for (std::size_t n1 = 0; n1 < sp.d1; ++n1) {
        for (std::size_t n2 = 0; n2 < sp.d2; ++n2) {
            std::size_t m1 = n1;
            std::size_t m2 = n2;
            double amp = 1.0;
            bool alive = true;
            for (int s = 0; s < sp.k2 && alive; ++s) alive = detail::ladder_step(m2, amp, false, sp.d2);
            for (int s = 0; s < sp.k1 && alive; ++s) alive = detail::ladder_step(m1, amp, true, sp.d1);
            if (!alive) continue;
            const std::size_t from = sp.index(+1, n1, n2);
            const std::size_t to = sp.index(-1, m1, m2);
            e[{to, from}] += amp;
            e[{from, to}] += std::conj(cplx{amp});
        }
    }
    return SparseMatrix::from_entries(sp.size(), e);
}

inline SparseMatrix build_hamiltonian(const SystemConfig& cfg) { return build_hamiltonian(space_for(cfg)); }

/// Largest |matrix element|, which bounds the fastest rotation frequency.
inline double max_coupling(const SparseMatrix& h) {
    double m = 0.0;
    for (std::size_t r = 0; r < h.size(); ++r) h.for_each_in_row(r, [&](std::size_t, cplx v) { m = std::max(m, std::abs(v)); });
    return m;
}

/// Cat state from the coherent recurrence c_{n+1} = c_n alpha / sqrt(n+1),
/// normalized over the truncated range.
inline std::vector<cplx> cat_amplitudes(cplx alpha, int epsilon, std::size_t d) {
    std::vector<cplx> plus(d);
    std::vector<cplx> minus(d);
    plus[0] = minus[0] = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n + 1 < d; ++n) {
        const double s = std::sqrt(static_cast<double>(n + 1));
        plus[n + 1] = plus[n] * alpha / s;
        minus[n + 1] = minus[n] * (-alpha) / s;
    }
    std::vector<cplx> out(d);
    double norm = 0.0;
    for (std::size_t n = 0; n < d; ++n) {
        out[n] = plus[n] + static_cast<double>(epsilon) * minus[n];
        norm += std::norm(out[n]);
    }
    if (norm == 0.0) throw std::domain_error("cat_amplitudes: null state");
    for (auto& c : out) c /= std::sqrt(norm);
    return out;
}

inline DenseStateVector initial_state(const SystemConfig& cfg) {
    const Space sp = space_for(cfg);
    const auto c1 = cat_amplitudes(cfg.mode1.alpha, cfg.mode1.epsilon, sp.d1);
    const auto c2 = cat_amplitudes(cfg.mode2.alpha, cfg.mode2.epsilon, sp.d2);
    const cplx up = std::cos(cfg.varphi);
    const cplx down = std::polar(std::sin(cfg.varphi), cfg.phi);
    DenseStateVector v{sp, std::vector<cplx>(sp.size())};
    for (std::size_t n1 = 0; n1 < sp.d1; ++n1)
        for (std::size_t n2 = 0; n2 < sp.d2; ++n2) {
            v.amplitudes[sp.index(+1, n1, n2)] = up * c1[n1] * c2[n2];
            v.amplitudes[sp.index(-1, n1, n2)] = down * c1[n1] * c2[n2];
        }
    return v;
}

/// Step-count and signed step for a run of length T with |step| <= max_step.
inline std::pair<std::uint64_t, double> step_plan(double T, double step, double max_coupling_value) {
    if (!std::isfinite(T)) throw std::domain_error("integrate: T must be finite");
    if (!(step > 0.0)) throw std::domain_error("integrate: step must be positive");
    const double limit = 0.01 / std::max(max_coupling_value, 1e-300);
    if (max_coupling_value > 0.0 && step > limit)
        throw std::domain_error("integrate: step exceeds 0.01 / Lambda_max = " + std::to_string(limit));
    if (T == 0.0) return {0, 0.0};
    const auto count = static_cast<std::uint64_t>(std::ceil(std::abs(T) / step));
    return {count, T / static_cast<double>(count)};
}

/// The RK4 update psi -> M psi for i psi' = H psi at fixed step h, written out
/// as the degree-4 polynomial M = sum_{j<=4} (-i h H)^j / j!.
inline SparseMatrix rk4_step_matrix(const SparseMatrix& h, double dt) {
    const SparseMatrix a = h.scaled(cplx{0.0, -dt});
    // Horner: I + A (I + A/2 (I + A/3 (I + A/4)))
    SparseMatrix m = a.scaled(0.25).plus_identity(1.0);
    m = (a.scaled(1.0 / 3.0) * m).plus_identity(1.0);
    m = (a.scaled(0.5) * m).plus_identity(1.0);
    m = (a * m).plus_identity(1.0);
    return m;
}

/// Propagator for `count` RK4 steps, M^count by repeated squaring.
class Propagator {
public:
    Propagator(const SparseMatrix& h, double T, double step) {
        const auto [count, dt] = step_plan(T, step, max_coupling(h));
        count_ = count;
        dt_ = dt;
        SparseMatrix power = rk4_step_matrix(h, dt);
        result_ = SparseMatrix::identity(h.size());
        for (std::uint64_t c = count; c > 0; c >>= 1) {
            if (c & 1U) result_ = result_ * power;
            if (c > 1) power = power * power;
        }
    }

    std::uint64_t steps() const noexcept { return count_; }
    double step() const noexcept { return dt_; }
    const SparseMatrix& matrix() const noexcept { return result_; }

    DenseStateVector apply(const DenseStateVector& v) const {
        return {v.space, result_.apply(v.amplitudes)};
    }

private:
    std::uint64_t count_ = 0;
    double dt_ = 0.0;
    SparseMatrix result_;
};

inline double default_step(const SparseMatrix& h) { return 0.01 / std::max(max_coupling(h), 1.0); }

/// Classical RK4 from psi0, one step at a time. The observer (if given) is
/// called after every step with (T, state).
inline DenseStateVector integrate_stepwise(const SparseMatrix& h, const DenseStateVector& psi0, double T, double step,
                                           const std::function<void(double, const DenseStateVector&)>& observer = {}) {
    const auto [count, dt] = step_plan(T, step, max_coupling(h));
    const std::size_t n = h.size();
    if (psi0.amplitudes.size() != n) throw std::domain_error("integrate: state does not match Hamiltonian");
    DenseStateVector psi = psi0;
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    const cplx mi{0.0, -1.0};
    auto rhs = [&](std::span<const cplx> x, std::vector<cplx>& out) {
        h.apply(x, out);
        for (auto& v : out) v *= mi;
    };
    for (std::uint64_t s = 0; s < count; ++s) {
        auto& y = psi.amplitudes;
        rhs(y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (observer) observer(dt * static_cast<double>(s + 1), psi);
    }
    return psi;
}

/// Oracle solution for a configuration at scaled time T.
inline DenseStateVector integrate(const SystemConfig& cfg, double T, double step) {
    const SparseMatrix h = build_hamiltonian(cfg);
    return Propagator(h, T, step).apply(initial_state(cfg));
}

inline DenseStateVector integrate(const SystemConfig& cfg, double T) {
    const SparseMatrix h = build_hamiltonian(cfg);
    return Propagator(h, T, default_step(h)).apply(initial_state(cfg));
}

/// Analytic state laid out in the oracle basis.
inline DenseStateVector to_dense(const EvolvedState& s) {
    const Space sp{s.extent1(), s.extent2(), s.k1, s.k2};
    DenseStateVector v{sp, std::vector<cplx>(sp.size())};
    for (std::size_t n1 = 0; n1 < sp.d1; ++n1)
        for (std::size_t n2 = 0; n2 < sp.d2; ++n2) {
            v.amplitudes[sp.index(+1, n1, n2)] = s.psi_plus(n1, n2);
            v.amplitudes[sp.index(-1, n1, n2)] = s.psi_minus(n1, n2);
        }
    return v;
}

/// |<a|b>|^2 / (<a|a> <b|b>)
inline double fidelity(const DenseStateVector& a, const DenseStateVector& b) {
    if (a.amplitudes.size() != b.amplitudes.size()) throw std::domain_error("fidelity: size mismatch");
    cplx overlap{};
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i) overlap += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    return std::norm(overlap) / (a.norm() * b.norm());
}

inline double energy(const SparseMatrix& h, const DenseStateVector& v) {
    const auto hv = h.apply(v.amplitudes);
    cplx acc{};
    for (std::size_t i = 0; i < hv.size(); ++i) acc += std::conj(v.amplitudes[i]) * hv[i];
    return acc.real();
}

/// <n1 + n2 + (k1 - k2) |+><+|>
inline double excitation(const DenseStateVector& v) {
    const Space& sp = v.space;
    double acc = 0.0;
    for (int atom : {+1, -1})
        for (std::size_t n1 = 0; n1 < sp.d1; ++n1)
            for (std::size_t n2 = 0; n2 < sp.d2; ++n2) {
                const double w = std::norm(v.amplitudes[sp.index(atom, n1, n2)]);
                const double q = static_cast<double>(n1 + n2) + (atom > 0 ? double(sp.k1) - double(sp.k2) : 0.0);
                acc += w * q;
            }
    return acc;
}

}  // namespace tmjcm::oracle
