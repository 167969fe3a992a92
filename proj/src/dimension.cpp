#include "ifs/dimension.hpp"

#include <cmath>

#include "ifs/errors.hpp"

namespace ifs {

const char* DimensionReport::method_name() const {
    switch (method) {
        case Method::UniformFormula: return "uniform-formula";
        case Method::MoranBisection: return "moran-bisection";
        case Method::EvolutionFormula: return "evolution-formula";
        case Method::BoxCounting: return "box-counting";
    }
    return "?";
}

namespace {

constexpr double kMoranResidual = 1e-12;
constexpr int kMoranMaxIters = 200;

void require_ratio(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw IfsError(Errc::InvalidRatio, "contraction ratio must lie in (0,1)");
}

double moran_sum(std::span<const double> ratios, double s) {
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum;
}

}  // namespace

DimensionReport moran_dimension(std::span<const double> ratios) {
    if (ratios.empty()) throw IfsError(Errc::InvalidRatio, "ratio list must be nonempty");
    for (double r : ratios) require_ratio(r);

    // s -> sum r_i^s is strictly decreasing; at s=0 it equals the map count.
    double lo = 0.0;
    double f_lo = moran_sum(ratios, lo) - 1.0;
    if (std::abs(f_lo) <= kMoranResidual)
        return {0.0, DimensionReport::Method::MoranBisection, std::abs(f_lo)};

    double hi = 1.0;
    while (moran_sum(ratios, hi) > 1.0) hi *= 2.0;

    double mid = 0.5 * (lo + hi);
    double residual = 0.0;
    for (int iter = 0; iter < kMoranMaxIters; ++iter) {
        mid = 0.5 * (lo + hi);
        const double f = moran_sum(ratios, mid) - 1.0;
        residual = std::abs(f);
        if (residual < kMoranResidual) break;
        if (f > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {mid, DimensionReport::Method::MoranBisection, residual};
}

DimensionReport uniform_dimension(int m, double r) {
    if (m < 1) throw IfsError(Errc::InvalidRatio, "map count must be at least 1");
    require_ratio(r);
    const double s = -std::log(static_cast<double>(m)) / std::log(r);
    const double residual = std::abs(m * std::pow(r, s) - 1.0);
    return {s, DimensionReport::Method::UniformFormula, residual};
}

DimensionReport evolved_dimension(double s, double r, double phi_t_r) {
    if (s < 0.0) throw IfsError(Errc::InvalidRatio, "similarity dimension must be nonnegative");
    require_ratio(r);
    require_ratio(phi_t_r);
    const double evolved = s * std::log(r) / std::log(phi_t_r);
    return {evolved, DimensionReport::Method::EvolutionFormula, 0.0};
}

}  // namespace ifs
