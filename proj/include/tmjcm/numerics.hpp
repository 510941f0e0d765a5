#pragma once

// Elementary numerical kernels shared by the rest of the library:
// log-factorials, associated Laguerre polynomials, uniform periodic grids,
// Gauss-Legendre nodes, a radix-2 FFT and a small dense matrix type.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmjcm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Row-major dense matrix. Value type, no aliasing tricks.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// ln(n!) via lgamma; exact zero for n in {0, 1}.
inline double log_factorial(std::size_t n) noexcept {
    if (n < 2) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// ln(n! / m!) for the factorial ratios that appear in Rabi frequencies and
/// Wigner kernels. Short ranges are summed directly to keep full precision.
inline double log_factorial_ratio(std::size_t n, std::size_t m) noexcept {
    if (n == m) return 0.0;
    const bool inverted = n < m;
    const std::size_t hi = inverted ? m : n;
    const std::size_t lo = inverted ? n : m;
    double acc = 0.0;
    if (hi - lo <= 16) {
        for (std::size_t j = lo + 1; j <= hi; ++j) acc += std::log(static_cast<double>(j));
    } else {
        acc = log_factorial(hi) - log_factorial(lo);
    }
    return inverted ? -acc : acc;
}

namespace detail {

inline double laguerre_nonneg(std::size_t n, double a, double x) {
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 1.0 + a - x;
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double next = ((2.0 * kk + 1.0 + a - x) * cur - (kk + a) * prev) / (kk + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace detail

/// Associated Laguerre polynomial L_n^a(x) for integer a.
///
/// Nonnegative a uses the upward three-term recurrence in n. Negative a is
/// reduced to a nonnegative upper index through
///   L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^{k}(x),  n >= k,
/// and throws std::domain_error when n < -a.
inline double assoc_laguerre(std::size_t n, int a, double x) {
    if (a >= 0) return detail::laguerre_nonneg(n, static_cast<double>(a), x);
    const auto k = static_cast<std::size_t>(-a);
    if (n < k) {
        throw std::domain_error("assoc_laguerre: need n >= -a for negative upper index (n=" +
                                std::to_string(n) + ", a=" + std::to_string(a) + ")");
    }
    const double base = detail::laguerre_nonneg(n - k, static_cast<double>(k), x);
    if (base == 0.0 || x == 0.0) return x == 0.0 ? 0.0 : base;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double log_mag = static_cast<double>(k) * std::log(std::abs(x)) - log_factorial_ratio(n, n - k);
    const double x_sign = (x < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
    return sign * x_sign * std::exp(log_mag) * base;
}

/// Uniform grid over the phase window [-pi, pi), endpoint excluded.
class PeriodicGrid {
public:
    static constexpr std::size_t min_count = 8;
    static constexpr std::size_t default_count = 512;

    explicit PeriodicGrid(std::size_t count = default_count) : count_(count) {
        if (count < min_count) {
            throw std::domain_error("PeriodicGrid: count must be >= 8, got " + std::to_string(count));
        }
        points_.resize(count);
        for (std::size_t i = 0; i < count; ++i) points_[i] = point(i);
    }

    std::size_t count() const noexcept { return count_; }
    double step() const noexcept { return two_pi / static_cast<double>(count_); }
    double point(std::size_t i) const noexcept {
        return -pi + two_pi * static_cast<double>(i) / static_cast<double>(count_);
    }
    std::span<const double> points() const noexcept { return points_; }

    bool operator==(const PeriodicGrid& o) const noexcept { return count_ == o.count_; }

private:
    std::size_t count_;
    std::vector<double> points_;
};

/// Rectangle rule over one period: (2*pi/count) * sum(values).
inline double periodic_integral(std::span<const double> values, const PeriodicGrid& grid) {
    if (values.size() != grid.count()) {
        throw std::domain_error("periodic_integral: " + std::to_string(values.size()) +
                                " values for a grid of " + std::to_string(grid.count()));
    }
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc * grid.step();
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes mapped onto [lo, hi].
inline QuadratureRule gauss_legendre(std::size_t count, double lo, double hi) {
    if (count == 0) throw std::domain_error("gauss_legendre: count must be positive");
    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double n = static_cast<double>(count);
    const double mid = 0.5 * (hi + lo);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
        double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t j = 0; j < count; ++j) {
                const double jj = static_cast<double>(j);
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * jj + 1.0) * z * p1 - jj * p2) / (jj + 1.0);
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[count - 1 - i] = mid + half * z;
        rule.weights[i] = half * w;
        rule.weights[count - 1 - i] = half * w;
    }
    return rule;
}

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 FFT computing X[g] = sum_n x[n] exp(-2 pi i n g / N).
inline void fft_inplace(std::span<cplx> data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw std::domain_error("fft_inplace: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        std::vector<cplx> twiddle(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = -two_pi * static_cast<double>(k) / static_cast<double>(len);
            twiddle[k] = {std::cos(ang), std::sin(ang)};
        }
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = data[start + k];
                const cplx v = data[start + k + half] * twiddle[k];
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

/// Evaluates f(theta_g) = sum_{n < coeffs.size()} coeffs[n] exp(-i n theta_g) on
/// every point of `grid`. Requires grid.count() > coeffs.size(); power-of-two grids
/// go through the zero-padded FFT, other sizes through an exact twiddle table.
inline void evaluate_on_grid(std::span<const cplx> coeffs, const PeriodicGrid& grid, std::span<cplx> out) {
    const std::size_t g = grid.count();
    if (coeffs.size() >= g) {
        throw std::domain_error("grid too coarse: " + std::to_string(g) + " points for " +
                                std::to_string(coeffs.size()) + " Fourier coefficients");
    }
    // theta_g = -pi + 2 pi g / G, so exp(-i n theta_g) = (-1)^n exp(-2 pi i n g / G).
    if (is_power_of_two(g)) {
        std::fill(out.begin(), out.end(), cplx{});
        for (std::size_t k = 0; k < coeffs.size(); ++k) out[k] = (k % 2 == 0) ? coeffs[k] : -coeffs[k];
        fft_inplace(out);
        return;
    }
    std::vector<cplx> table(g);
    for (std::size_t k = 0; k < g; ++k) {
        const double ang = -two_pi * static_cast<double>(k) / static_cast<double>(g);
        table[k] = {std::cos(ang), std::sin(ang)};
    }
    for (std::size_t gi = 0; gi < g; ++gi) {
        cplx acc{};
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            const cplx c = (k % 2 == 0) ? coeffs[k] : -coeffs[k];
            acc += c * table[(k * gi) % g];
        }
        out[gi] = acc;
    }
}

}  // namespace tmjcm
