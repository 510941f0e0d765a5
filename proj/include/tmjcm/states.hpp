#pragma once

// Fock-basis amplitudes of single-mode Schrodinger-cat states
//   N (|alpha> + eps |-alpha>),  eps in {-1, 0, +1}.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmjcm/numerics.hpp"

namespace tmjcm {

struct CatStateSpec {
    cplx alpha{0.0, 0.0};
    int epsilon = 0;

    bool operator==(const CatStateSpec&) const = default;
};

inline void validate(const CatStateSpec& spec) {
    if (spec.epsilon < -1 || spec.epsilon > 1) {
        throw std::domain_error("cat state: epsilon must be -1, 0 or +1, got " + std::to_string(spec.epsilon));
    }
    if (spec.epsilon == -1 && spec.alpha == cplx{}) {
        throw std::domain_error("cat state: odd cat of vacuum is the null vector");
    }
    if (!std::isfinite(spec.alpha.real()) || !std::isfinite(spec.alpha.imag())) {
        throw std::domain_error("cat state: alpha must be finite");
    }
}

/// N = [1 + eps^2 + 2 eps exp(-2|alpha|^2)]^(-1/2).
inline double normalization(const CatStateSpec& spec) {
    validate(spec);
    const double eps = spec.epsilon;
    const double r2 = std::norm(spec.alpha);
    // 1 - exp(-2 r2) loses digits near the vacuum; expm1 keeps them.
    const double denom = (spec.epsilon == -1) ? -2.0 * std::expm1(-2.0 * r2)
                                              : 1.0 + eps * eps + 2.0 * eps * std::exp(-2.0 * r2);
    return 1.0 / std::sqrt(denom);
}

/// C_n = N exp(-|alpha|^2/2) alpha^n / sqrt(n!) [1 + (-1)^n eps]; magnitude in log space.
inline cplx amplitude(const CatStateSpec& spec, std::size_t n) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    const double interference = 1.0 + parity * spec.epsilon;
    if (interference == 0.0) return {0.0, 0.0};
    const double norm = normalization(spec);
    const double r = std::abs(spec.alpha);
    if (r == 0.0) return n == 0 ? cplx{norm * interference, 0.0} : cplx{0.0, 0.0};
    const double log_mag = -0.5 * r * r + static_cast<double>(n) * std::log(r) - 0.5 * log_factorial(n);
    const double phase = static_cast<double>(n) * std::arg(spec.alpha);
    return std::polar(norm * interference * std::exp(log_mag), phase);
}

struct AmplitudeTable {
    std::vector<cplx> coeffs;

    std::size_t dim() const noexcept { return coeffs.size(); }

    double captured_norm() const noexcept {
        double acc = 0.0;
        for (const auto& c : coeffs) acc += std::norm(c);
        return acc;
    }
};

inline AmplitudeTable amplitude_table(const CatStateSpec& spec, std::size_t dim) {
    if (dim == 0) throw std::domain_error("amplitude_table: dim must be >= 1");
    validate(spec);
    AmplitudeTable table;
    table.coeffs.reserve(dim);
    for (std::size_t n = 0; n < dim; ++n) table.coeffs.push_back(amplitude(spec, n));
    return table;
}

inline constexpr std::size_t min_truncation = 16;
inline constexpr std::size_t truncation_margin = 8;

/// Smallest N whose Poisson(|alpha|^2) tail beyond N-1 is below tail_tol, plus a
/// safety margin, never below 16. The Poisson tail bounds every cat state with
/// the same |alpha| up to the factor (1 + |eps|)^2 N^2, which the margin absorbs.
inline std::size_t choose_truncation(cplx alpha, double tail_tol) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw std::domain_error("choose_truncation: tail_tol must lie in (0, 1)");
    }
    const double mean = std::norm(alpha);
    if (mean == 0.0) return min_truncation;
    // Walk the Poisson pmf in log space; once past the mode the remaining tail is
    // bounded by a geometric series with ratio mean/(n+1).
    const double log_mean = std::log(mean);
    std::size_t n = 0;
    double log_p = -mean;
    for (;; ++n) {
        const double ratio = mean / static_cast<double>(n + 1);
        if (ratio < 1.0) {
            const double log_tail = log_p + std::log(ratio) - std::log1p(-ratio);
            if (log_tail < std::log(tail_tol)) break;
        }
        log_p += log_mean - std::log(static_cast<double>(n + 1));
    }
    // pmf(n) counted, the tail beyond n is below tol: cut index is n + 1.
    return std::max(min_truncation, n + 1 + truncation_margin);
}

}  // namespace tmjcm
