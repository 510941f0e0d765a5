#pragma once

// Revival-collapse analysis of sampled observables and the strong-intensity
// closed forms for revival times and the mode-1 phase variance.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tmjcm/dynamics.hpp"
#include "tmjcm/numerics.hpp"
#include "tmjcm/states.hpp"
#include "tmjcm/time_series.hpp"

namespace tmjcm {

struct RevivalReport {
    std::vector<double> centers;            ///< envelope maxima of interior packets, sorted
    std::vector<bool> secondary;            ///< per center: weaker than half its neighbours
    TimeSeries envelope;                    ///< moving RMS of the mean-removed series
    std::vector<std::pair<double, double>> collapse_intervals;  ///< envelope below threshold

    std::vector<double> primary_centers() const {
        std::vector<double> out;
        for (std::size_t i = 0; i < centers.size(); ++i)
            if (!secondary[i]) out.push_back(centers[i]);
        return out;
    }
};

inline constexpr double default_revival_window_fraction = 0.05;
inline constexpr double secondary_revival_cut = 0.5;

/// Envelope = moving root-mean-square of (values - mean) over a centred window
/// of width `window` (truncated at the series ends). The envelope is split into
/// packets where it exceeds threshold * max(envelope); every packet that does not
/// touch either end of the series contributes one center at its envelope maximum
/// (earliest sample on ties).
inline RevivalReport detect_revivals(const TimeSeries& series, double window, double threshold) {
    series.validate();
    const std::size_t n = series.size();
    if (n < 16) throw std::domain_error("detect_revivals: need at least 16 samples");
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::domain_error("detect_revivals: threshold must lie in (0, 1)");
    std::vector<double> steps(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) steps[i] = series.times[i + 1] - series.times[i];
    std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
    const double median_step = steps[steps.size() / 2];
    if (!(window > 2.0 * median_step)) throw std::domain_error("detect_revivals: window must exceed two time steps");

    double mean = 0.0;
    for (double v : series.values) mean += v;
    mean /= static_cast<double>(n);
    // Prefix sums of squared deviations make the moving window O(n).
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = series.values[i] - mean;
        prefix[i + 1] = prefix[i] + d * d;
    }
    RevivalReport report;
    report.envelope.times = series.times;
    report.envelope.values.resize(n);
    const double half = 0.5 * window;
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = series.times[i];
        while (series.times[lo] < t - half) ++lo;
        while (hi < n && series.times[hi] <= t + half) ++hi;
        report.envelope.values[i] = std::sqrt((prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo));
    }

    const auto& env = report.envelope.values;
    const double cut = threshold * *std::max_element(env.begin(), env.end());
    std::vector<double> peak_heights;
    std::size_t i = 0;
    while (i < n) {
        const bool above = env[i] > cut;
        std::size_t j = i;
        while (j < n && (env[j] > cut) == above) ++j;
        if (above) {
            if (i > 0 && j < n) {
                std::size_t best = i;
                for (std::size_t k = i; k < j; ++k)
                    if (env[k] > env[best]) best = k;
                report.centers.push_back(series.times[best]);
                peak_heights.push_back(env[best]);
            }
        } else {
            report.collapse_intervals.emplace_back(series.times[i], series.times[j - 1]);
        }
        i = j;
    }
    report.secondary.assign(report.centers.size(), false);
    for (std::size_t c = 0; c < report.centers.size(); ++c) {
        const bool has_left = c > 0;
        const bool has_right = c + 1 < report.centers.size();
        if (!has_left || !has_right) continue;
        const double neighbours = std::min(peak_heights[c - 1], peak_heights[c + 1]);
        report.secondary[c] = peak_heights[c] < secondary_revival_cut * neighbours;
    }
    return report;
}

inline RevivalReport detect_revivals(const TimeSeries& series, double threshold = 0.2) {
    const double span = series.times.back() - series.times.front();
    return detect_revivals(series, default_revival_window_fraction * span, threshold);
}

/// Median spacing between consecutive primary revival centers.
inline std::optional<double> revival_spacing(const RevivalReport& report) {
    const auto centers = report.primary_centers();
    if (centers.size() < 2) return std::nullopt;
    std::vector<double> gaps;
    for (std::size_t i = 1; i < centers.size(); ++i) gaps.push_back(centers[i] - centers[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t m = gaps.size() / 2;
    return gaps.size() % 2 == 1 ? gaps[m] : 0.5 * (gaps[m - 1] + gaps[m]);
}

struct PeriodicPeak {
    std::size_t index = 0;
    double position = 0.0;
    double value = 0.0;
    double prominence = 0.0;
};

/// Local maxima of a sampled periodic function whose prominence is at least
/// `min_prominence` times (max - min). Prominence is the height above the higher
/// of the two lowest points reached before climbing to a taller sample on each side.
inline std::vector<PeriodicPeak> periodic_peaks(std::span<const double> values, const PeriodicGrid& grid,
                                                double min_prominence) {
    const std::size_t n = values.size();
    if (n != grid.count()) throw std::domain_error("periodic_peaks: values do not match grid");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double range = *mx - *mn;
    std::vector<PeriodicPeak> peaks;
    if (range <= 0.0) return peaks;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = values[i];
        const double left = values[(i + n - 1) % n];
        const double right = values[(i + 1) % n];
        // Plateaus count once, at their first sample.
        if (!(v > left && v >= right)) continue;
        double low_left = v;
        double low_right = v;
        bool taller_left = false;
        bool taller_right = false;
        for (std::size_t s = 1; s < n; ++s) {
            const double w = values[(i + n - s) % n];
            if (w > v) { taller_left = true; break; }
            low_left = std::min(low_left, w);
        }
        for (std::size_t s = 1; s < n; ++s) {
            const double w = values[(i + s) % n];
            if (w > v) { taller_right = true; break; }
            low_right = std::min(low_right, w);
        }
        const double base = (taller_left || taller_right) ? std::max(low_left, low_right) : *mn;
        const double prom = v - base;
        if (prom >= min_prominence * range) peaks.push_back({i, grid.point(i), v, prom});
    }
    return peaks;
}

namespace detail {

inline void require_single_photon_pair(const SystemConfig& cfg, const char* who) {
    if (cfg.k1 != 1 || cfg.k2 != 1) throw std::domain_error(std::string(who) + ": requires k1 = k2 = 1");
}

}  // namespace detail

/// The estimate is only meaningful well inside the strong-intensity regime.
inline bool strong_intensity(const SystemConfig& cfg) noexcept {
    return std::abs(cfg.mode1.alpha) >= 3.0 && std::abs(cfg.mode2.alpha) >= 3.0;
}

/// Strong-intensity revival estimate from the phase condition
///   2 T sqrt(nbar mbar) = 2 pi m'     (coherent inputs)
///   4 T sqrt(nbar mbar) = 2 pi m'     (even cats in both modes)
/// with nbar = |alpha1|^2, mbar = |alpha2|^2. The integer order m' is not fixed
/// by the argument; calibrate it against a measured center with
/// calibrate_revival_order().
inline double predict_revival_time(const SystemConfig& cfg, int order = 1) {
    detail::require_single_photon_pair(cfg, "predict_revival_time");
    if (order < 1) throw std::domain_error("predict_revival_time: order must be positive");
    const double nm = std::abs(cfg.mode1.alpha) * std::abs(cfg.mode2.alpha);
    if (nm == 0.0) throw std::domain_error("predict_revival_time: needs nonzero amplitudes");
    const double coherent = pi * order / nm;
    if (cfg.mode1.epsilon == 0 && cfg.mode2.epsilon == 0) return coherent;
    if (cfg.mode1.epsilon == 1 && cfg.mode2.epsilon == 1) return 0.5 * coherent;
    throw std::domain_error("predict_revival_time: needs coherent or even-cat inputs in both modes");
}

/// Order m' (not rounded) that makes predict_revival_time match a measured center.
inline double calibrate_revival_order(const SystemConfig& cfg, double measured_center) {
    return measured_center / predict_revival_time(cfg, 1);
}

/// Harmonic (strong-mbar) approximation of the mode-1 phase variance for
/// coherent inputs and an excited atom:
///   pi^2/3 + 4 sum_{n>n'} C_n C_n' (-1)^(n'-n)/(n'-n)^2
///            exp(-2 mbar sin^2(T Z / (4 sqrt mbar)))
///            cos(T sqrt(mbar) Z / 2 + mbar sin(T Z / (4 sqrt mbar))),
/// Z = sqrt(n+1) - sqrt(n'+1). Mode-1 amplitudes must be real.
inline double harmonic_variance_approx(const SystemConfig& cfg, double T) {
    detail::require_single_photon_pair(cfg, "harmonic_variance_approx");
    if (cfg.mode1.epsilon != 0 || cfg.mode2.epsilon != 0)
        throw std::domain_error("harmonic_variance_approx: requires coherent inputs");
    if (std::sin(cfg.varphi) != 0.0 || std::cos(cfg.varphi) < 0.0 || cfg.phi != 0.0)
        throw std::domain_error("harmonic_variance_approx: requires an excited atom (varphi = 0, phi = 0)");
    if (cfg.mode1.alpha.imag() != 0.0)
        throw std::domain_error("harmonic_variance_approx: requires real mode-1 amplitude");
    const double mbar = std::norm(cfg.mode2.alpha);
    if (mbar == 0.0) throw std::domain_error("harmonic_variance_approx: requires |alpha2| > 0");
    const double root = std::sqrt(mbar);
    const auto c = amplitude_table(cfg.mode1, cfg.dim1).coeffs;
    double acc = pi * pi / 3.0;
    for (std::size_t n = 1; n < c.size(); ++n) {
        for (std::size_t np = 0; np < n; ++np) {
            const double k = static_cast<double>(n - np);
            const double sign = ((n - np) % 2 == 0) ? 1.0 : -1.0;
            const double z = std::sqrt(static_cast<double>(n) + 1.0) - std::sqrt(static_cast<double>(np) + 1.0);
            const double slow = std::sin(T * z / (4.0 * root));
            const double damp = std::exp(-2.0 * mbar * slow * slow);
            const double osc = std::cos(0.5 * T * root * z + mbar * slow);
            acc += 4.0 * c[n].real() * c[np].real() * sign / (k * k) * damp * osc;
        }
    }
    return acc;
}

/// Time at which the harmonic damping factor returns to one for the dominant
/// neighbouring pair (n = round(nbar), n' = n - 1): T Z / (4 sqrt mbar) = pi.
inline double harmonic_revival_time(const SystemConfig& cfg) {
    detail::require_single_photon_pair(cfg, "harmonic_revival_time");
    const double nbar = std::norm(cfg.mode1.alpha);
    const double mbar = std::norm(cfg.mode2.alpha);
    if (nbar < 1.0 || mbar == 0.0) throw std::domain_error("harmonic_revival_time: needs nbar >= 1, mbar > 0");
    const double n = std::round(nbar);
    const double z = std::sqrt(n + 1.0) - std::sqrt(n);
    return 4.0 * pi * std::sqrt(mbar) / z;
}

}  // namespace tmjcm
