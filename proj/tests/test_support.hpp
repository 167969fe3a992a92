// Shared fixtures for the test binaries: canonical spaces, small systems,
// and a grid-sampling oracle for the sup metric.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ifs/contraction.hpp"
#include "ifs/geometry.hpp"
#include "ifs/sequence.hpp"

namespace testsupport {

using namespace ifs;

inline SpaceBox unit_interval() { return SpaceBox(1, Vec{0.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}); }

inline SpaceBox unit_square() { return SpaceBox(2, Vec{0.0, 0.0, 0.0}, Vec{1.0, 1.0, 0.0}); }

// f(x) = a*x + b on a 1D box.
inline AffineContraction map1(const SpaceBox& space, double a, double b) {
    Mat m = zero_mat();
    m[0][0] = a;
    return validate_contraction(space, m, Vec{b, 0.0, 0.0});
}

// f(x) = a*x + (bx, by) on a 2D box, uniform scale a.
inline AffineContraction map2(const SpaceBox& space, double a, double bx, double by) {
    return validate_contraction(space, scale_mat(identity_mat(2), a, 2), Vec{bx, by, 0.0});
}

inline std::vector<std::pair<std::string, AffineContraction>> sierpinski_entries(
    const SpaceBox& space) {
    return {{"f1", map2(space, 0.5, 0.0, 0.0)},
            {"f2", map2(space, 0.5, 0.5, 0.0)},
            {"f3", map2(space, 0.5, 0.25, 0.5)}};
}

inline FiniteIfs sierpinski_system() {
    const SpaceBox space = unit_square();
    return FiniteIfs(space, sierpinski_entries(space));
}

inline AlphabetPtr sierpinski_alphabet() {
    const SpaceBox space = unit_square();
    return std::make_shared<const ContractionAlphabet>(space, sierpinski_entries(space));
}

// Alphabet {h1, h2} of half-scale maps covering [0,1].
inline AlphabetPtr interval_alphabet() {
    const SpaceBox space = unit_interval();
    std::vector<std::pair<std::string, AffineContraction>> entries = {
        {"h1", map1(space, 0.5, 0.0)}, {"h2", map1(space, 0.5, 0.5)}};
    return std::make_shared<const ContractionAlphabet>(space, std::move(entries));
}

inline SpaceBox unit_cube(int dim) {
    Vec hi = zero_vec();
    for (int i = 0; i < dim; ++i) hi[static_cast<std::size_t>(i)] = 1.0;
    return SpaceBox(dim, zero_vec(), hi);
}

inline double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1p-53; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * u01(g);
}

// Random affine contraction of the unit cube. Matrix entries stay within
// +-0.45/dim, so the Frobenius norm (hence the spectral norm) is below 0.45
// and a valid offset range is always nonempty.
inline AffineContraction random_contraction(std::mt19937_64& g, int dim) {
    const SpaceBox space = unit_cube(dim);
    Mat m = zero_mat();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                uniform(g, -0.45, 0.45) / dim;
    Vec b = zero_vec();
    for (int i = 0; i < dim; ++i) {
        double lo = 0.0, hi = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double e = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (e < 0.0) lo += e;
            else hi += e;
        }
        b[static_cast<std::size_t>(i)] = uniform(g, -lo, 1.0 - hi);
    }
    return validate_contraction(space, m, b);
}

// Oracle for sup_distance: sample |f(x)-g(x)| on a regular grid. Always a
// lower bound on the true supremum; the gap is bounded by the Lipschitz
// constant of the difference map times the half-diagonal of a grid cell.
inline double grid_sup_distance(const AffineContraction& f, const AffineContraction& g,
                                const SpaceBox& space, int steps) {
    const int dim = space.dim();
    double worst = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    while (true) {
        Vec p = zero_vec();
        for (int a = 0; a < dim; ++a) {
            const double t = static_cast<double>(idx[static_cast<std::size_t>(a)]) / steps;
            p[static_cast<std::size_t>(a)] =
                space.lower()[static_cast<std::size_t>(a)] + t * space.width(a);
        }
        const double d = norm2(sub(ifs::apply(f, p), ifs::apply(g, p), dim), dim);
        if (d > worst) worst = d;
        int a = 0;
        for (; a < dim; ++a) {
            if (++idx[static_cast<std::size_t>(a)] <= steps) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
        if (a == dim) break;
    }
    return worst;
}

}  // namespace testsupport
