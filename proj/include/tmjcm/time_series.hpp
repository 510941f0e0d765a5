#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tmjcm {

/// Scalar observable sampled over scaled time T = g t.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    std::size_t size() const noexcept { return times.size(); }

    void validate() const {
        if (times.size() != values.size()) throw std::domain_error("TimeSeries: length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) throw std::domain_error("TimeSeries: times must be strictly increasing");
        }
    }
};

/// t_min, t_min + h, ..., t_max with `steps` points (steps >= 2).
inline std::vector<double> uniform_times(double t_min, double t_max, std::size_t steps) {
    if (steps < 2) throw std::domain_error("uniform_times: need at least 2 steps");
    if (!(t_max > t_min)) throw std::domain_error("uniform_times: t_max must exceed t_min");
    std::vector<double> out(steps);
    const double h = (t_max - t_min) / static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) out[i] = t_min + h * static_cast<double>(i);
    out.back() = t_max;
    return out;
}

}  // namespace tmjcm
