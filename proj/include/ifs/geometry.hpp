#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "ifs/errors.hpp"

namespace ifs {

// Points and matrices live in at most three dimensions; entries past the
// active dimension stay zero so value comparison works across the board.
using Vec = std::array<double, 3>;
using Mat = std::array<std::array<double, 3>, 3>;

constexpr int kMaxDim = 3;

inline Vec zero_vec() { return Vec{0.0, 0.0, 0.0}; }
Mat zero_mat();
Mat identity_mat(int dim);
Mat scale_mat(const Mat& a, double factor, int dim);
Vec scale_vec(const Vec& v, double factor, int dim);

Vec mat_vec(const Mat& a, const Vec& x, int dim);
Vec add(const Vec& a, const Vec& b, int dim);
Vec sub(const Vec& a, const Vec& b, int dim);
double dot(const Vec& a, const Vec& b, int dim);
double norm2(const Vec& v, int dim);
Vec cross(const Vec& a, const Vec& b);

std::string vec_to_string(const Vec& v, int dim);

// Largest singular value of `a`, via closed-form eigenvalues of a^T a
// (quadratic for dim 2, trigonometric cubic for dim 3). No iteration, so
// there is no convergence tolerance to reason about.
double spectral_norm(const Mat& a, int dim);

// a = r*Q with Q orthogonal, tested as a^T a == r^2 * I within `tol`.
bool is_similarity_matrix(const Mat& a, int dim, double tol = 1e-12);

// Compact axis-aligned box, the space X every contraction acts on.
class SpaceBox {
public:
    SpaceBox(int dim, const Vec& lower, const Vec& upper);

    int dim() const { return dim_; }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }
    double width(int axis) const { return upper_[axis] - lower_[axis]; }
    double diagonal() const;
    Vec center() const;

    int vertex_count() const { return 1 << dim_; }
    // Vertex selected by bitmask: bit i picks upper bound along axis i.
    Vec vertex(int mask) const;

    bool contains(const Vec& p, double tol = 0.0) const;
    bool contains_origin() const;
    // True when `inner` lies inside this box (closed containment).
    bool contains_box(const SpaceBox& inner, double tol = 0.0) const;

    bool operator==(const SpaceBox& other) const = default;

private:
    int dim_;
    Vec lower_;
    Vec upper_;
};

}  // namespace ifs
