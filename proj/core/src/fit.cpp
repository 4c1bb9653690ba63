#include "trapmodes/fit.hpp"

#include "trapmodes/error.hpp"

#include <cmath>
#include <sstream>

namespace trapmodes::asymptotics {

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw FitError("fit_linear: x and y differ in length");
    if (n < 2) throw FitError("fit_linear: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw FitError("fit_linear: all x values coincide");
    LinearFit f;
    f.points = int(n);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        sse += r * r;
    }
    f.r2 = syy > 0.0 ? std::max(0.0, std::min(1.0, 1.0 - sse / syy)) : 1.0;
    f.slope_stderr = n > 2 ? std::sqrt(sse / double(n - 2) / sxx) : 0.0;
    return f;
}

ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& points) {
    ExponentialFit out;
    std::vector<double> x, y;
    for (const auto& [h, dev] : points) {
        if (!(h > 0.0)) throw FitError("fit_exponential: h must be positive");
        if (!(dev > 0.0) || !std::isfinite(dev)) {
            std::ostringstream msg;
            msg << "dropped h = " << h << ": deviation " << dev << " is not positive";
            out.notes.push_back(msg.str());
            continue;
        }
        x.push_back(1.0 / h);
        y.push_back(std::log(dev));
    }
    if (x.size() < 3) throw FitError("fit_exponential: fewer than three positive deviations");
    const LinearFit lf = fit_linear(x, y);
    out.c = std::exp(lf.intercept);
    out.tau = -lf.slope;
    out.r2 = lf.r2;
    out.tau_stderr = lf.slope_stderr;
    out.points_used = lf.points;
    return out;
}

}  // namespace trapmodes::asymptotics
