// Port of the catch22 feature set (canonical C reference implementation)
// extended with mean and standard deviation. The 22 features are computed on
// the z-scored series exactly as the reference pipeline does; floating-point
// operation order follows the reference wherever a discrete decision (bin
// assignment, first crossing, first minimum) depends on it.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "tsxfer/features.hpp"

namespace tsxfer {

namespace {

using cplx = std::complex<double>;
using Series = std::span<const double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// The reference uses this rounded constant for twiddles and angular frequency.
constexpr double kRefPi = 3.14159265359;

bool has_nan(Series y) {
    return std::any_of(y.begin(), y.end(), [](double v) { return std::isnan(v); });
}

double mean(Series a) {
    double m = 0.0;
    for (double v : a) m += v;
    return m / static_cast<double>(a.size());
}

double stddev(Series a) {
    const double m = mean(a);
    double sd = 0.0;
    for (double v : a) sd += std::pow(v - m, 2);
    return std::sqrt(sd / static_cast<double>(a.size() - 1));
}

double median(std::vector<double> b) {
    std::sort(b.begin(), b.end());
    const std::size_t n = b.size();
    if (n % 2 == 1) return b[n / 2];
    return (b[n / 2] + b[n / 2 - 1]) / 2.0;
}

double corr(const double* x, const double* y, std::size_t n) {
    const double mx = mean({x, n});
    const double my = mean({y, n});
    double nom = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        nom += (x[i] - mx) * (y[i] - my);
        dx += (x[i] - mx) * (x[i] - mx);
        dy += (y[i] - my) * (y[i] - my);
    }
    return nom / std::sqrt(dx * dy);
}

double cov(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    const double mx = mean(x);
    const double my = mean(y);
    double c = 0.0;
    for (std::size_t i = 0; i < 3; ++i) c += (x[i] - mx) * (y[i] - my);
    return c / 2.0;
}

/// Reference linear regression: slope m and intercept b; (0, 0) when singular.
void linreg(int n, const double* x, const double* y, double& m, double& b) {
    double sumx = 0.0, sumx2 = 0.0, sumxy = 0.0, sumy = 0.0;
    for (int i = 0; i < n; ++i) {
        sumx += x[i];
        sumx2 += x[i] * x[i];
        sumxy += x[i] * y[i];
        sumy += y[i];
    }
    const double denom = (n * sumx2 - sumx * sumx);
    if (denom == 0) {
        m = 0;
        b = 0;
        return;
    }
    m = (n * sumxy - sumx * sumy) / denom;
    b = (sumy * sumx2 - sumx * sumxy) / denom;
}

double norm2(const double* a, std::size_t n) {
    double out = 0.0;
    for (std::size_t i = 0; i < n; ++i) out += a[i] * a[i];
    return std::sqrt(out);
}

int nextpow2(int n) {
    n--;
    n |= n >> 1;
    n |= n >> 2;
    n |= n >> 4;
    n |= n >> 8;
    n |= n >> 16;
    return n + 1;
}

/// Reference quantile: midpoint interpolation, clamped to min/max outside
/// [0.5/n, 1 - 0.5/n].
double quantile(Series y, double quant) {
    std::vector<double> tmp(y.begin(), y.end());
    std::sort(tmp.begin(), tmp.end());
    const int size = static_cast<int>(tmp.size());
    const double q = 0.5 / size;
    if (quant < q) return tmp[0];
    if (quant > (1 - q)) return tmp[static_cast<std::size_t>(size - 1)];
    const double idx = size * quant - 0.5;
    const int left = static_cast<int>(std::floor(idx));
    const int right = static_cast<int>(std::ceil(idx));
    return tmp[static_cast<std::size_t>(left)] +
           (idx - left) * (tmp[static_cast<std::size_t>(right)] - tmp[static_cast<std::size_t>(left)]) /
               (right - left);
}

/// Labels 1..groups by quantile bins; 0 where a value falls in no bin.
std::vector<int> coarsegrain(Series y, int groups) {
    std::vector<double> ls(static_cast<std::size_t>(groups + 1));
    const double step = 1.0 / groups;
    double start = 0.0;
    for (auto& v : ls) {
        v = start;
        start += step;
    }
    std::vector<double> th(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) th[i] = quantile(y, ls[i]);
    th[0] -= 1;
    std::vector<int> labels(y.size(), 0);
    for (int i = 0; i < groups; ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] > th[static_cast<std::size_t>(i)] && y[j] <= th[static_cast<std::size_t>(i + 1)])
                labels[j] = i + 1;
    return labels;
}

// ---- FFT (recursive radix-2, reference twiddles) --------------------------

std::vector<cplx> twiddles(int size) {
    std::vector<cplx> tw(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) tw[static_cast<std::size_t>(i)] = std::exp(cplx(0.0, -kRefPi * i / size));
    return tw;
}

void fft_rec(cplx* a, cplx* out, int size, int step, const cplx* tw) {
    if (step < size) {
        fft_rec(out, a, size, step * 2, tw);
        fft_rec(out + step, a + step, size, step * 2, tw);
        for (int i = 0; i < size; i += 2 * step) {
            const cplx t = tw[i] * out[i + step];
            a[i / 2] = out[i] + t;
            a[(i + size) / 2] = out[i] - t;
        }
    }
}

void fft(std::vector<cplx>& a, const std::vector<cplx>& tw) {
    if (a.size() < 2) return;
    std::vector<cplx> out = a;
    fft_rec(a.data(), out.data(), static_cast<int>(a.size()), 1, tw.data());
}

/// Autocorrelation at every lag via zero-padded FFT, normalised by lag 0.
std::vector<double> autocorrs(Series y) {
    const double m = mean(y);
    const int size = static_cast<int>(y.size());
    const int n_fft = nextpow2(size) << 1;
    std::vector<cplx> f(static_cast<std::size_t>(n_fft), cplx(0.0, 0.0));
    for (int i = 0; i < size; ++i) f[static_cast<std::size_t>(i)] = cplx(y[static_cast<std::size_t>(i)] - m, 0.0);
    const auto tw = twiddles(n_fft);
    fft(f, tw);
    for (auto& v : f) v = v * std::conj(v);
    fft(f, tw);
    const double c = f[0].real(), d = f[0].imag();
    std::vector<double> out(static_cast<std::size_t>(n_fft));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double a = f[i].real(), b = f[i].imag();
        out[i] = (a * c + b * d) / (c * c + d * d);
    }
    return out;
}

int first_zero(Series y, int max_tau) {
    const auto ac = autocorrs(y);
    int i = 0;
    while (ac[static_cast<std::size_t>(i)] > 0 && i < max_tau) ++i;
    return i;
}

// ---- distribution -----------------------------------------------------------

double histogram_mode(Series y, int n_bins) {
    if (has_nan(y)) return kNaN;
    double min_v = DBL_MAX, max_v = -DBL_MAX;
    for (double v : y) {
        if (v < min_v) min_v = v;
        if (v > max_v) max_v = v;
    }
    const double step = (max_v - min_v) / n_bins;
    std::vector<int> counts(static_cast<std::size_t>(n_bins), 0);
    for (double v : y) {
        int bin = static_cast<int>((v - min_v) / step);
        if (bin < 0) bin = 0;
        if (bin >= n_bins) bin = n_bins - 1;
        counts[static_cast<std::size_t>(bin)] += 1;
    }
    std::vector<double> edges(static_cast<std::size_t>(n_bins + 1));
    for (int i = 0; i <= n_bins; ++i) edges[static_cast<std::size_t>(i)] = i * step + min_v;

    double max_count = 0;
    int num_maxs = 1;
    double out = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > max_count) {
            max_count = counts[i];
            num_maxs = 1;
            out = (edges[i] + edges[i + 1]) * 0.5;
        } else if (counts[i] == max_count) {
            num_maxs += 1;
            out += (edges[i] + edges[i + 1]) * 0.5;
        }
    }
    return out / num_maxs;
}

double outlier_include(Series y, double sign) {
    if (has_nan(y)) return kNaN;
    const std::size_t size = y.size();
    const double inc = 0.01;
    bool constant = true;
    int tot = 0;
    std::vector<double> work(size);
    for (std::size_t i = 0; i < size; ++i) {
        if (y[i] != y[0]) constant = false;
        work[i] = sign * y[i];
        if (work[i] >= 0) tot += 1;
    }
    if (constant) return 0;
    const double max_v = *std::max_element(work.begin(), work.end());
    if (max_v < inc) return 0;
    const int n_thresh = static_cast<int>(max_v / inc + 1);

    // Exceedance positions (1-based) per threshold j*inc.
    std::vector<int> counts(static_cast<std::size_t>(n_thresh));
    for (int j = 0; j < n_thresh; ++j) {
        int c = 0;
        for (double v : work)
            if (v >= j * inc) ++c;
        counts[static_cast<std::size_t>(j)] = c;
    }
    int mj = 0;
    int fbi = n_thresh - 1;
    for (int j = 0; j < n_thresh; ++j)
        if ((counts[static_cast<std::size_t>(j)] - 1) * 100.0 / tot > 2) mj = j;
    for (int j = n_thresh - 1; j >= 0; --j)
        if (counts[static_cast<std::size_t>(j)] - 1 == 0) fbi = j;
    const int trim = std::min(mj, fbi);

    const double denom = static_cast<double>(size) / 2;
    std::vector<double> med_rel(static_cast<std::size_t>(trim + 1));
    std::vector<double> pos;
    pos.reserve(size);
    for (int j = 0; j <= trim; ++j) {
        pos.clear();
        for (std::size_t i = 0; i < size; ++i)
            if (work[i] >= j * inc) pos.push_back(static_cast<double>(i + 1));
        const std::size_t m = pos.size();
        // positions are already ascending
        const double med = m % 2 == 1 ? pos[m / 2] : (pos[m / 2] + pos[m / 2 - 1]) / 2.0;
        med_rel[static_cast<std::size_t>(j)] = med / denom - 1;
    }
    return median(std::move(med_rel));
}

// ---- linear autocorrelation -------------------------------------------------

double acf_timescale(Series y) {
    if (has_nan(y)) return 0;
    const auto ac = autocorrs(y);
    const double thresh = 1.0 / std::exp(1);
    const int size = static_cast<int>(y.size());
    for (int i = 0; i < size - 2; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (ac[k + 1] < thresh) {
            const double m = ac[k + 1] - ac[k];
            const double dy = thresh - ac[k];
            return static_cast<double>(i) + dy / m;
        }
    }
    return static_cast<double>(size);
}

double acf_first_min(Series y) {
    if (has_nan(y)) return 0;
    const auto ac = autocorrs(y);
    const std::size_t size = y.size();
    for (std::size_t i = 1; i + 1 < size; ++i)
        if (ac[i] < ac[i - 1] && ac[i] < ac[i + 1]) return static_cast<double>(i);
    return static_cast<double>(size);
}

// ---- nonlinear autocorrelation ---------------------------------------------

double trev(Series y) {
    if (has_nan(y)) return kNaN;
    std::vector<double> d(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) d[i] = std::pow(y[i + 1] - y[i], 3);
    return mean(d);
}

double ami2(Series y) {
    if (has_nan(y)) return kNaN;
    constexpr int tau = 2;
    constexpr int bins = 5;
    const std::size_t n = y.size() - tau;
    const double max_v = *std::max_element(y.begin(), y.end());
    const double min_v = *std::min_element(y.begin(), y.end());
    const double step = (max_v - min_v + 0.2) / 5;
    std::array<double, bins + 1> edges{};
    for (int i = 0; i < bins + 1; ++i) edges[static_cast<std::size_t>(i)] = min_v + step * i - 0.1;

    auto assign = [&](double v) {
        for (int j = 0; j < bins + 1; ++j)
            if (v < edges[static_cast<std::size_t>(j)]) return j;
        return 0;
    };
    std::array<int, (bins + 1) * (bins + 1)> joint{};
    for (std::size_t i = 0; i < n; ++i) {
        const double code = (assign(y[i]) - 1) * (bins + 1) + assign(y[i + tau]);
        for (int j = 0; j < (bins + 1) * (bins + 1); ++j)
            if (code <= j + 1) {
                joint[static_cast<std::size_t>(j)] += 1;
                break;
            }
    }

    double pij[bins][bins];
    int sum_bins = 0;
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) {
            pij[j][i] = joint[static_cast<std::size_t>(i * (bins + 1) + j)];
            sum_bins += static_cast<int>(pij[j][i]);
        }
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) pij[j][i] /= sum_bins;

    double pi[bins] = {0}, pj[bins] = {0};
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j) {
            pi[i] += pij[i][j];
            pj[j] += pij[i][j];
        }
    double ami = 0;
    for (int i = 0; i < bins; ++i)
        for (int j = 0; j < bins; ++j)
            if (pij[i][j] > 0) ami += pij[i][j] * std::log(pij[i][j] / (pj[j] * pi[i]));
    return ami;
}

double ami_timescale(Series y) {
    if (has_nan(y)) return kNaN;
    const int size = static_cast<int>(y.size());
    int tau = 40;
    const int max_tau = (size + 1) / 2;
    if (tau > max_tau) tau = max_tau;
    if (tau < 3) return tau;

    auto ami_at = [&](int lag) {
        const double ac = corr(y.data(), y.data() + lag, static_cast<std::size_t>(size - lag));
        return -0.5 * std::log(1.0 - ac * ac);
    };
    double prev = ami_at(1);
    double curr = ami_at(2);
    for (int i = 1; i < tau - 1; ++i) {
        const double next = ami_at(i + 2);
        if (curr < prev && curr < next) return i;
        prev = curr;
        curr = next;
    }
    return tau;
}

double embedding_dist(Series y) {
    if (has_nan(y)) return kNaN;
    const int size = static_cast<int>(y.size());
    int tau = first_zero(y, size);
    if (tau > static_cast<double>(size) / 10) tau = static_cast<int>(std::floor(static_cast<double>(size) / 10));

    const int n = size - tau - 1;
    if (n < 1) return kNaN;
    std::vector<double> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const auto kt = static_cast<std::size_t>(i + tau);
        d[k] = std::sqrt((y[k + 1] - y[k]) * (y[k + 1] - y[k]) + (y[kt] - y[kt + 1]) * (y[kt] - y[kt + 1]));
        if (std::isnan(d[k])) return kNaN;
    }
    const double l = mean(d);

    const double max_v = *std::max_element(d.begin(), d.end());
    const double min_v = *std::min_element(d.begin(), d.end());
    const double sd = stddev(d);
    if (sd < 0.001) return 0;
    const int bins = static_cast<int>(std::ceil((max_v - min_v) / (3.5 * sd / std::pow(n, 1 / 3.))));
    if (bins == 0) return 0;

    const double step = (max_v - min_v) / bins;
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (double v : d) {
        int bin = static_cast<int>((v - min_v) / step);
        if (bin < 0) bin = 0;
        if (bin >= bins) bin = bins - 1;
        counts[static_cast<std::size_t>(bin)] += 1;
    }
    std::vector<double> diff(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
        const double lo = i * step + min_v;
        const double hi = (i + 1) * step + min_v;
        const double norm = static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(n);
        double expf = std::exp(-(lo + hi) * 0.5 / l) / l;
        if (expf < 0) expf = 0;
        diff[static_cast<std::size_t>(i)] = std::fabs(norm - expf);
    }
    return mean(diff);
}

// ---- successive differences / symbolic ------------------------------------

double high_fluctuation(Series y) {
    if (has_nan(y)) return kNaN;
    const std::size_t n = y.size();
    double count = 0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (std::fabs(y[i + 1] - y[i]) * 1000 > 40) count += 1;
    return count / static_cast<double>(n - 1);
}

double stretch_high(Series y) {
    if (has_nan(y)) return kNaN;
    const int size = static_cast<int>(y.size());
    const double m = mean(y);
    int best = 0, last = 0;
    for (int i = 0; i < size - 1; ++i) {
        const bool below = (y[static_cast<std::size_t>(i)] - m <= 0);
        if (below || i == size - 2) {
            const int stretch = i - last;
            if (stretch > best) best = stretch;
            last = i;
        }
    }
    return best;
}

double stretch_decreasing(Series y) {
    if (has_nan(y)) return kNaN;
    const int size = static_cast<int>(y.size());
    int best = 0, last = 0;
    for (int i = 0; i < size - 1; ++i) {
        const bool rising = !(y[static_cast<std::size_t>(i + 1)] - y[static_cast<std::size_t>(i)] < 0);
        if (rising || i == size - 2) {
            const int stretch = i - last;
            if (stretch > best) best = stretch;
            last = i;
        }
    }
    return best;
}

double entropy_pairs(Series y) {
    if (has_nan(y)) return kNaN;
    const auto labels = coarsegrain(y, 3);
    const std::size_t size = y.size();
    double counts[3][3] = {};
    for (std::size_t k = 0; k + 1 < size; ++k) {
        const int a = labels[k], b = labels[k + 1];
        if (a >= 1 && a <= 3 && b >= 1 && b <= 3) counts[a - 1][b - 1] += 1;
    }
    double hh = 0.0;
    for (auto& row : counts) {
        double f = 0.0;
        for (double c : row) {
            const double p = c / (static_cast<double>(size) - 1.0);
            if (p > 0) f += p * std::log(p);
        }
        hh += -1 * f;
    }
    return hh;
}

double transition_matrix(Series y) {
    if (has_nan(y)) return kNaN;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) return kNaN;
    const int size = static_cast<int>(y.size());
    const int tau = first_zero(y, size);
    if (tau < 1) return kNaN;
    const int n_down = (size - 1) / tau + 1;
    std::vector<double> down(static_cast<std::size_t>(n_down));
    for (int i = 0; i < n_down; ++i) down[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i * tau)];
    const auto labels = coarsegrain(down, 3);

    double t[3][3] = {};
    for (int j = 0; j < n_down - 1; ++j) {
        const int a = labels[static_cast<std::size_t>(j)], b = labels[static_cast<std::size_t>(j + 1)];
        if (a < 1 || b < 1) return kNaN;
        t[a - 1][b - 1] += 1;
    }
    for (auto& row : t)
        for (double& v : row) v /= (n_down - 1);

    std::array<std::array<double, 3>, 3> columns{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t c = 0; c < 3; ++c) columns[c][i] = t[i][c];
    double sum = 0;
    for (std::size_t i = 0; i < 3; ++i) sum += cov(columns[i], columns[i]);
    return sum;
}

// ---- periodicity --------------------------------------------------------------

/// Least-squares cubic spline with knots {0, floor(n/2)-1, n-1} (two pieces,
/// C2 at the interior knot). Any basis of that space gives the same fit; the
/// truncated power basis in a [0,1]-scaled coordinate is solved by QR.
std::vector<double> spline_trend(Series y) {
    const std::size_t n = y.size();
    const double last = static_cast<double>(n - 1);
    const double knot = (std::floor(static_cast<double>(n) / 2.0) - 1) / last;
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 5);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / last;
        const double r = std::max(0.0, u - knot);
        const auto row = static_cast<Eigen::Index>(i);
        basis(row, 0) = 1.0;
        basis(row, 1) = u;
        basis(row, 2) = u * u;
        basis(row, 3) = u * u * u;
        basis(row, 4) = r * r * r;
        rhs(row) = y[i];
    }
    const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd fit = basis * coef;
    return {fit.data(), fit.data() + fit.size()};
}

double periodicity(Series y) {
    if (has_nan(y)) return 0;
    const int size = static_cast<int>(y.size());
    const int acmax = static_cast<int>(std::ceil(static_cast<double>(size) / 3));
    // With fewer than 4 lags no trough can precede a peak.
    if (acmax < 4) return 0;
    const double th = 0.01;

    const auto trend = spline_trend(y);
    std::vector<double> sub(y.size());
    for (std::size_t i = 0; i < sub.size(); ++i) sub[i] = y[i] - trend[i];

    std::vector<double> acf(static_cast<std::size_t>(acmax));
    for (int lag = 1; lag <= acmax; ++lag) {
        const int m = size - lag;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += sub[static_cast<std::size_t>(i)] * sub[static_cast<std::size_t>(i + lag)];
        acf[static_cast<std::size_t>(lag - 1)] = acc / m;
    }

    int last_trough = -1;
    for (int i = 1; i < acmax - 1; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double slope_in = acf[k] - acf[k - 1];
        const double slope_out = acf[k + 1] - acf[k];
        if (slope_in < 0 && slope_out > 0) {
            last_trough = i;
        } else if (slope_in > 0 && slope_out < 0) {
            if (last_trough < 0) continue;
            const double peak = acf[k];
            const double trough = acf[static_cast<std::size_t>(last_trough)];
            if (peak - trough < th) continue;
            if (peak < 0) continue;
            return i;
        }
    }
    return 0;
}

// ---- forecasting residuals -------------------------------------------------------

std::vector<double> mean_forecast_residuals(Series y, int train) {
    const int n = static_cast<int>(y.size()) - train;
    std::vector<double> res(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double est = 0.0;
        for (int j = 0; j < train; ++j) est += y[static_cast<std::size_t>(i + j)];
        res[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i + train)] - est / static_cast<double>(train);
    }
    return res;
}

double whiten_timescale(Series y) {
    if (has_nan(y)) return kNaN;
    if (y.size() <= 1) return kNaN;
    const auto res = mean_forecast_residuals(y, 1);
    const double res_zero = first_zero(res, static_cast<int>(res.size()));
    const double y_zero = first_zero(y, static_cast<int>(y.size()));
    return res_zero / y_zero;
}

double forecast_error(Series y) {
    if (has_nan(y)) return kNaN;
    if (y.size() <= 3) return kNaN;
    return stddev(mean_forecast_residuals(y, 3));
}

// ---- fluctuation analysis ---------------------------------------------------------

double fluctuation_analysis(Series y, int lag, bool dfa) {
    if (has_nan(y)) return kNaN;
    const int size = static_cast<int>(y.size());
    const double lin_low = std::log(5);
    const double lin_high = std::log(size / 2);
    constexpr int steps = 50;
    const double tau_step = (lin_high - lin_low) / (steps - 1);
    std::array<int, steps> tau{};
    for (int i = 0; i < steps; ++i)
        tau[static_cast<std::size_t>(i)] = static_cast<int>(std::round(std::exp(lin_low + i * tau_step)));

    // Reference de-duplication, including its in-place shifting behaviour.
    int n_tau = steps;
    for (int i = 0; i < steps - 1; ++i) {
        while (tau[static_cast<std::size_t>(i)] == tau[static_cast<std::size_t>(i + 1)] && i < n_tau - 1) {
            for (int j = i + 1; j < steps - 1; ++j) tau[static_cast<std::size_t>(j)] = tau[static_cast<std::size_t>(j + 1)];
            n_tau -= 1;
        }
    }
    if (n_tau < 12) return 0;

    const int size_cs = size / lag;
    std::vector<double> cs(static_cast<std::size_t>(size_cs));
    cs[0] = y[0];
    for (int i = 0; i < size_cs - 1; ++i)
        cs[static_cast<std::size_t>(i + 1)] = cs[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>((i + 1) * lag)];

    std::vector<double> fluct(static_cast<std::size_t>(n_tau));
    for (int i = 0; i < n_tau; ++i) {
        const int t = tau[static_cast<std::size_t>(i)];
        const int buffers = size_cs / t;
        double sumx = 0.0, sumx2 = 0.0;
        for (int k = 0; k < t; ++k) {
            const double xv = k + 1;
            sumx += xv;
            sumx2 += xv * xv;
        }
        const double denom = (static_cast<double>(t) * sumx2 - sumx * sumx);
        const bool singular = denom == 0;
        double acc = 0.0;
        for (int j = 0; j < buffers; ++j) {
            const double* w = cs.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(t);
            double sumxy = 0.0, sumy = 0.0;
            for (int k = 0; k < t; ++k) {
                const double xv = k + 1;
                sumxy += xv * w[k];
                sumy += w[k];
            }
            double m = 0.0, b = 0.0;
            if (!singular) {
                m = (static_cast<double>(t) * sumxy - sumx * sumy) / denom;
                b = (sumy * sumx2 - sumx * sumxy) / denom;
            }
            if (dfa) {
                for (int k = 0; k < t; ++k) {
                    const double r = w[k] - (m * (k + 1) + b);
                    acc += r * r;
                }
            } else {
                double r = w[0] - (m * (0 + 1) + b);
                double mx = r, mn = r;
                for (int k = 1; k < t; ++k) {
                    r = w[k] - (m * (k + 1) + b);
                    if (r > mx) mx = r;
                    if (r < mn) mn = r;
                }
                acc += (mx - mn) * (mx - mn);
            }
        }
        fluct[static_cast<std::size_t>(i)] = dfa ? std::sqrt(acc / (buffers * t)) : std::sqrt(acc / buffers);
    }

    std::vector<double> logt(static_cast<std::size_t>(n_tau)), logf(static_cast<std::size_t>(n_tau));
    for (int i = 0; i < n_tau; ++i) {
        logt[static_cast<std::size_t>(i)] = std::log(tau[static_cast<std::size_t>(i)]);
        logf[static_cast<std::size_t>(i)] = std::log(fluct[static_cast<std::size_t>(i)]);
    }

    constexpr int min_points = 6;
    const int n_err = n_tau - 2 * min_points + 1;
    std::vector<double> sserr(static_cast<std::size_t>(n_err));
    std::vector<double> buffer(static_cast<std::size_t>(n_tau - min_points + 1));
    for (int i = min_points; i < n_tau - min_points + 1; ++i) {
        double m1 = 0, b1 = 0, m2 = 0, b2 = 0;
        linreg(i, logt.data(), logf.data(), m1, b1);
        linreg(n_tau - i + 1, logt.data() + i - 1, logf.data() + i - 1, m2, b2);
        double err = 0.0;
        for (int j = 0; j < i; ++j)
            buffer[static_cast<std::size_t>(j)] = logt[static_cast<std::size_t>(j)] * m1 + b1 - logf[static_cast<std::size_t>(j)];
        err += norm2(buffer.data(), static_cast<std::size_t>(i));
        for (int j = 0; j < n_tau - i + 1; ++j)
            buffer[static_cast<std::size_t>(j)] =
                logt[static_cast<std::size_t>(j + i - 1)] * m2 + b2 - logf[static_cast<std::size_t>(j + i - 1)];
        err += norm2(buffer.data(), static_cast<std::size_t>(n_tau - i + 1));
        sserr[static_cast<std::size_t>(i - min_points)] = err;
    }

    const double minimum = *std::min_element(sserr.begin(), sserr.end());
    double first_min = 0.0;
    for (int i = 0; i < n_err; ++i)
        if (sserr[static_cast<std::size_t>(i)] == minimum) {
            first_min = i + min_points - 1;
            break;
        }
    return (first_min + 1) / n_tau;
}

// ---- spectral -----------------------------------------------------------------------

struct WelchSummary {
    double centroid = kNaN;
    double area_5_1 = kNaN;
};

WelchSummary welch_summaries(Series y) {
    if (has_nan(y)) return {};
    const int size = static_cast<int>(y.size());
    const int n_fft = nextpow2(size);
    const double df = 1.0 / nextpow2(size);
    const double m = mean(y);
    // Rectangular window spanning the whole series: exactly one segment.
    const int segments = static_cast<int>(std::floor(static_cast<double>(size) / (static_cast<double>(size) / 2.0))) - 1;
    const double kmu = segments * std::pow(std::sqrt(static_cast<double>(size)), 2);

    std::vector<double> power(static_cast<std::size_t>(n_fft), 0.0);
    const auto tw = twiddles(n_fft);
    for (int s = 0; s < segments; ++s) {
        std::vector<cplx> f(static_cast<std::size_t>(n_fft), cplx(0.0, 0.0));
        const int offset = static_cast<int>(s * static_cast<double>(size) / 2.0);
        for (int i = 0; i < size; ++i)
            f[static_cast<std::size_t>(i)] = cplx(1.0 * y[static_cast<std::size_t>(i + offset)] - m, 0.0);
        fft(f, tw);
        for (std::size_t l = 0; l < f.size(); ++l) power[l] += std::pow(std::abs(f[l]), 2);
    }

    const int n_out = n_fft / 2 + 1;
    std::vector<double> w(static_cast<std::size_t>(n_out)), sw(static_cast<std::size_t>(n_out));
    for (int i = 0; i < n_out; ++i) {
        const auto k = static_cast<std::size_t>(i);
        double pxx = power[k] / kmu * 1.0;
        if (i > 0 && i < n_out - 1) pxx *= 2;
        w[k] = 2 * kRefPi * (static_cast<double>(i) * df);
        sw[k] = pxx / (2 * kRefPi);
        if (std::isinf(sw[k])) return {0, 0};
    }
    const double dw = w[1] - w[0];
    std::vector<double> cs(sw.size());
    std::partial_sum(sw.begin(), sw.end(), cs.begin());

    WelchSummary out;
    const double half = cs.back() * 0.5;
    out.centroid = 0;
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs[i] > half) {
            out.centroid = w[i];
            break;
        }
    double area = 0;
    for (int i = 0; i < n_out / 5; ++i) area += sw[static_cast<std::size_t>(i)];
    out.area_5_1 = area * dw;
    return out;
}

}  // namespace

FeatureVector catch24_features(std::span<const double> raw) {
    const std::size_t n = raw.size();
    if (n < 3) throw Error(Errc::SeriesTooShort, fmt::format("catch24 needs n >= 3, got {}", n));

    std::vector<double> z(n);
    {
        const double m = mean(raw);
        const double sd = stddev(raw);
        for (std::size_t i = 0; i < n; ++i) z[i] = (raw[i] - m) / sd;
    }
    const Series y(z);
    const auto welch = welch_summaries(y);

    FeatureVector out;
    out.names = feature_names(FeatureSet::Catch24);
    out.values = {
        histogram_mode(y, 5),
        histogram_mode(y, 10),
        acf_timescale(y),
        acf_first_min(y),
        ami2(y),
        trev(y),
        high_fluctuation(y),
        stretch_high(y),
        transition_matrix(y),
        periodicity(y),
        embedding_dist(y),
        ami_timescale(y),
        whiten_timescale(y),
        outlier_include(y, 1.0),
        outlier_include(y, -1.0),
        welch.centroid,
        stretch_decreasing(y),
        entropy_pairs(y),
        fluctuation_analysis(y, 1, false),
        fluctuation_analysis(y, 2, true),
        welch.area_5_1,
        forecast_error(y),
        mean(raw),
        stddev(raw),
    };
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (!std::isfinite(out.values[i])) {
            out.warnings.push_back(fmt::format("{}: non-finite mapped to 0", out.names[i]));
            out.values[i] = 0.0;
        }
    return out;
}

}  // namespace tsxfer
