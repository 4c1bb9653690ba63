#pragma once

#include <string>
#include <utility>
#include <vector>

namespace trapmodes::asymptotics {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
};

// Ordinary least squares y ≈ intercept + slope·x. Needs two distinct x.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

// deviation(h) ≈ c·exp(-τ/h), fitted as log(deviation) against 1/h.
struct ExponentialFit {
    double c = 0.0;
    double tau = 0.0;
    double r2 = 0.0;
    double tau_stderr = 0.0;
    int points_used = 0;
    std::vector<std::string> notes;
};

// R² below this on a sweep spanning a decade of h flags non-exponential
// behavior; c·h² data over a decade fits with R² ≈ 0.90-0.92.
inline constexpr double exponential_r2_threshold = 0.98;

// points are (h, deviation); non-positive deviations are dropped with a note.
// Fewer than three usable points raise FitError.
ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& points);

}  // namespace trapmodes::asymptotics
