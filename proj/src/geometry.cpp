#include "ifs/geometry.hpp"

#include <algorithm>
#include <cstdio>

namespace ifs {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotContractive: return "NotContractive";
        case Errc::EscapesSpace: return "EscapesSpace";
        case Errc::PointOutsideSpace: return "PointOutsideSpace";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::AlphabetMismatch: return "AlphabetMismatch";
        case Errc::EmptySystem: return "EmptySystem";
        case Errc::TimeOutsideDomain: return "TimeOutsideDomain";
        case Errc::OriginNotInSpace: return "OriginNotInSpace";
        case Errc::InvalidRatio: return "InvalidRatio";
        case Errc::ResolutionMismatch: return "ResolutionMismatch";
        case Errc::EmptyRaster: return "EmptyRaster";
        case Errc::PrerequisiteFailed: return "PrerequisiteFailed";
        case Errc::ParseError: return "ParseError";
        case Errc::ValidationError: return "ValidationError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

Mat zero_mat() {
    Mat m{};
    for (auto& row : m) row.fill(0.0);
    return m;
}

Mat identity_mat(int dim) {
    Mat m = zero_mat();
    for (int i = 0; i < dim; ++i) m[i][i] = 1.0;
    return m;
}

Mat scale_mat(const Mat& a, double factor, int dim) {
    Mat m = zero_mat();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m[i][j] = factor * a[i][j];
    return m;
}

Vec scale_vec(const Vec& v, double factor, int dim) {
    Vec r = zero_vec();
    for (int i = 0; i < dim; ++i) r[i] = factor * v[i];
    return r;
}

Vec mat_vec(const Mat& a, const Vec& x, int dim) {
    Vec r = zero_vec();
    for (int i = 0; i < dim; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += a[i][j] * x[j];
        r[i] = s;
    }
    return r;
}

Vec add(const Vec& a, const Vec& b, int dim) {
    Vec r = zero_vec();
    for (int i = 0; i < dim; ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b, int dim) {
    Vec r = zero_vec();
    for (int i = 0; i < dim; ++i) r[i] = a[i] - b[i];
    return r;
}

double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& v, int dim) { return std::sqrt(dot(v, v, dim)); }

Vec cross(const Vec& a, const Vec& b) {
    return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]};
}

std::string vec_to_string(const Vec& v, int dim) {
    std::string out = "(";
    char buf[64];
    for (int i = 0; i < dim; ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", v[i]);
        out += buf;
        if (i + 1 < dim) out += ", ";
    }
    out += ")";
    return out;
}

namespace {

// Gram matrix a^T a (symmetric positive semidefinite).
Mat gram(const Mat& a, int dim) {
    Mat s = zero_mat();
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k) acc += a[k][i] * a[k][j];
            s[i][j] = acc;
        }
    return s;
}

double det3(const Mat& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Largest eigenvalue of a symmetric 3x3 matrix, trigonometric closed form.
double max_eig_sym3(const Mat& s) {
    const double p1 = s[0][1] * s[0][1] + s[0][2] * s[0][2] + s[1][2] * s[1][2];
    if (p1 == 0.0) return std::max({s[0][0], s[1][1], s[2][2]});

    const double q = (s[0][0] + s[1][1] + s[2][2]) / 3.0;
    const double p2 = (s[0][0] - q) * (s[0][0] - q) + (s[1][1] - q) * (s[1][1] - q) +
                      (s[2][2] - q) * (s[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat b = zero_mat();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = (s[i][j] - (i == j ? q : 0.0)) / p;
    double r = det3(b) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi);
}

}  // namespace

double spectral_norm(const Mat& a, int dim) {
    if (dim == 1) return std::abs(a[0][0]);
    const Mat s = gram(a, dim);
    double lambda = 0.0;
    if (dim == 2) {
        const double mean = (s[0][0] + s[1][1]) / 2.0;
        const double half = (s[0][0] - s[1][1]) / 2.0;
        lambda = mean + std::sqrt(half * half + s[0][1] * s[0][1]);
    } else {
        lambda = max_eig_sym3(s);
    }
    return std::sqrt(std::max(lambda, 0.0));
}

bool is_similarity_matrix(const Mat& a, int dim, double tol) {
    const Mat s = gram(a, dim);
    double scale = 1.0;
    for (int i = 0; i < dim; ++i) scale = std::max(scale, std::abs(s[i][i]));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            if (i == j) continue;
            if (std::abs(s[i][j]) > tol * scale) return false;
        }
    for (int i = 1; i < dim; ++i)
        if (std::abs(s[i][i] - s[0][0]) > tol * scale) return false;
    return true;
}

SpaceBox::SpaceBox(int dim, const Vec& lower, const Vec& upper)
    : dim_(dim), lower_(zero_vec()), upper_(zero_vec()) {
    if (dim < 1 || dim > kMaxDim)
        throw IfsError(Errc::ValidationError, "space dimension must be 1, 2 or 3");
    for (int i = 0; i < dim; ++i) {
        if (!(lower[i] < upper[i]))
            throw IfsError(Errc::ValidationError,
                           "space bounds must satisfy lower < upper on axis " + std::to_string(i));
        lower_[i] = lower[i];
        upper_[i] = upper[i];
    }
}

double SpaceBox::diagonal() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += width(i) * width(i);
    return std::sqrt(s);
}

Vec SpaceBox::center() const {
    Vec c = zero_vec();
    for (int i = 0; i < dim_; ++i) c[i] = 0.5 * (lower_[i] + upper_[i]);
    return c;
}

Vec SpaceBox::vertex(int mask) const {
    Vec v = zero_vec();
    for (int i = 0; i < dim_; ++i) v[i] = (mask >> i) & 1 ? upper_[i] : lower_[i];
    return v;
}

bool SpaceBox::contains(const Vec& p, double tol) const {
    for (int i = 0; i < dim_; ++i) {
        const double slack = tol * std::max({1.0, std::abs(lower_[i]), std::abs(upper_[i])});
        if (p[i] < lower_[i] - slack || p[i] > upper_[i] + slack) return false;
    }
    return true;
}

bool SpaceBox::contains_origin() const { return contains(zero_vec()); }

bool SpaceBox::contains_box(const SpaceBox& inner, double tol) const {
    if (inner.dim_ != dim_) return false;
    return contains(inner.lower_, tol) && contains(inner.upper_, tol);
}

}  // namespace ifs
