#include "tsxfer/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/beta.hpp>
#include <fmt/format.h>

#include "tsxfer/error.hpp"

namespace tsxfer {

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error(Errc::EmptyInput, "median of an empty list");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw Error(Errc::InsufficientPoints, "variance needs at least 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

double student_t_cdf(double t, double dof) {
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    // P(|T| > |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2)
    const double tail = boost::math::ibeta(dof / 2.0, 0.5, dof / (dof + t * t));
    return t > 0 ? 1.0 - tail / 2.0 : tail / 2.0;
}

OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error(Errc::InsufficientPoints,
                    fmt::format("x has {} values, y has {}", x.size(), y.size()));
    const std::size_t n = x.size();
    if (n < 3) throw Error(Errc::InsufficientPoints, fmt::format("need n >= 3, got {}", n));

    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(Errc::DegenerateX, "x has zero variance");

    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0) {
        fit.slope = 0.0;
        fit.intercept = my;
        fit.p_value = 1.0;
        return fit;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    // Residuals at rounding level relative to the response spread.
    if (sse <= 1e-24 * syy) {
        fit.exact_fit = true;
        fit.p_value = 0.0;
        fit.t_stat = fit.slope > 0 ? INFINITY : -INFINITY;
        return fit;
    }
    const double dof = static_cast<double>(n - 2);
    const double se = std::sqrt(sse / dof / sxx);
    fit.t_stat = fit.slope / se;
    fit.p_value = std::clamp(boost::math::ibeta(dof / 2.0, 0.5, dof / (dof + fit.t_stat * fit.t_stat)), 0.0, 1.0);
    return fit;
}

}  // namespace tsxfer
