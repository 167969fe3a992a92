#pragma once

#include <span>

namespace ifs {

struct DimensionReport {
    enum class Method { UniformFormula, MoranBisection, EvolutionFormula, BoxCounting };
    double s = 0.0;
    Method method = Method::MoranBisection;
    double residual = 0.0;  // |sum r_i^s - 1| where a Moran equation applies

    const char* method_name() const;
};

// Unique s >= 0 with sum_i r_i^s = 1, by bisection on the strictly
// decreasing sum. All ratios must lie in (0,1).
DimensionReport moran_dimension(std::span<const double> ratios);

// Closed form s = -log m / log r for m maps of common ratio r.
DimensionReport uniform_dimension(int m, double r);

// Dimension after a parity evolution step that sends ratio r to phi_t_r:
// s' = s / log_r(phi_t_r) = s * log r / log phi_t_r.
DimensionReport evolved_dimension(double s, double r, double phi_t_r);

}  // namespace ifs
