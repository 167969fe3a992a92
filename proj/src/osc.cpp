#include "ifs/osc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace ifs {

namespace {

constexpr double kContainTol = 1e-12;
constexpr double kSepTol = 1e-12;

bool is_diagonal(const Mat& m, int dim) {
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            if (i != j && m[i][j] != 0.0) return false;
        }
    }
    return true;
}

double det_dim(const Mat& m, int dim) {
    if (dim == 1) return m[0][0];
    if (dim == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Adjugate inverse; caller guarantees a nonzero determinant.
Mat inverse_dim(const Mat& m, int dim) {
    Mat inv = zero_mat();
    const double det = det_dim(m, dim);
    if (dim == 1) {
        inv[0][0] = 1.0 / det;
        return inv;
    }
    if (dim == 2) {
        inv[0][0] = m[1][1] / det;
        inv[0][1] = -m[0][1] / det;
        inv[1][0] = -m[1][0] / det;
        inv[1][1] = m[0][0] / det;
        return inv;
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int a = (j + 1) % 3;
            const int b = (j + 2) % 3;
            const int c = (i + 1) % 3;
            const int d = (i + 2) % 3;
            inv[i][j] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
        }
    }
    return inv;
}

// Image of one axis of the open box under x -> a*x + b: an open interval,
// degenerate to the point {b} when a == 0 (lo == hi encodes the point).
struct AxisSet {
    double lo;
    double hi;
    bool point() const { return lo == hi; }
};

AxisSet axis_image(double a, double b, double v_lo, double v_hi) {
    if (a == 0.0) return {b, b};
    const double x = a * v_lo + b;
    const double y = a * v_hi + b;
    return {std::min(x, y), std::max(x, y)};
}

// Touching open intervals are disjoint; a point on an open interval's
// boundary is outside it.
bool axis_disjoint(const AxisSet& s, const AxisSet& t) {
    if (s.point() && t.point()) return s.lo != t.lo;
    if (s.point()) return s.lo <= t.lo || s.lo >= t.hi;
    if (t.point()) return t.lo <= s.lo || t.lo >= s.hi;
    return s.hi <= t.lo || t.hi <= s.lo;
}

double axis_overlap_mid(const AxisSet& s, const AxisSet& t) {
    if (s.point()) return s.lo;
    if (t.point()) return t.lo;
    return 0.5 * (std::max(s.lo, t.lo) + std::min(s.hi, t.hi));
}

struct Parallelotope {
    Vec center = zero_vec();
    std::array<Vec, 3> edge{zero_vec(), zero_vec(), zero_vec()};  // half-extent vectors
};

Parallelotope image_parallelotope(const AffineContraction& f, const SpaceBox& v) {
    const int n = v.dim();
    Parallelotope p;
    p.center = add(mat_vec(f.matrix(), v.center(), n), f.offset(), n);
    for (int k = 0; k < n; ++k) {
        Vec axis = zero_vec();
        axis[k] = 0.5 * v.width(k);
        p.edge[k] = mat_vec(f.matrix(), axis, n);
    }
    return p;
}

double projection_radius(const Parallelotope& p, const Vec& axis, int dim) {
    double r = 0.0;
    for (int k = 0; k < dim; ++k) r += std::abs(dot(axis, p.edge[k], dim));
    return r;
}

// Nonstrict separation along `axis`: projections that at most touch mean the
// open images are disjoint.
bool separated_along(const Parallelotope& p, const Parallelotope& q, const Vec& axis, int dim) {
    const double gap = std::abs(dot(axis, sub(p.center, q.center, dim), dim));
    const double reach = projection_radius(p, axis, dim) + projection_radius(q, axis, dim);
    return gap >= reach - kSepTol * std::max(1.0, reach);
}

bool sat_disjoint(const Parallelotope& p, const Parallelotope& q, int dim) {
    if (dim == 1) {
        Vec axis = zero_vec();
        axis[0] = 1.0;
        return separated_along(p, q, axis, dim);
    }
    std::vector<Vec> axes;
    if (dim == 2) {
        for (const Parallelotope* body : {&p, &q}) {
            for (int k = 0; k < 2; ++k) {
                axes.push_back(Vec{-body->edge[k][1], body->edge[k][0], 0.0});
            }
        }
    } else {
        for (const Parallelotope* body : {&p, &q}) {
            for (int k = 0; k < 3; ++k) {
                axes.push_back(cross(body->edge[k], body->edge[(k + 1) % 3]));
            }
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) axes.push_back(cross(p.edge[a], q.edge[b]));
        }
    }
    for (const Vec& axis : axes) {
        const double len = norm2(axis, dim);
        if (len <= 1e-14) continue;  // parallel edges; covered by other axes
        if (separated_along(p, q, axis, dim)) return true;
    }
    return false;
}

Vec clamp_to(const Vec& x, const Vec& lo, const Vec& hi, int dim) {
    Vec out = zero_vec();
    for (int k = 0; k < dim; ++k) out[k] = std::clamp(x[k], lo[k], hi[k]);
    return out;
}

bool inside(const Vec& x, const Vec& lo, const Vec& hi, int dim) {
    for (int k = 0; k < dim; ++k) {
        if (x[k] < lo[k] || x[k] > hi[k]) return false;
    }
    return true;
}

// Searches for a point interior to both open images: u in V with
// f_j^{-1}(f_i(u)) also in V, by alternating clamps onto V shrunk by a
// decreasing margin. Both matrices must be invertible.
std::optional<Vec> interior_witness(const AffineContraction& fi, const AffineContraction& fj,
                                    const SpaceBox& v) {
    const int n = v.dim();
    const Mat ai_inv = inverse_dim(fi.matrix(), n);
    const Mat aj_inv = inverse_dim(fj.matrix(), n);
    const auto forward = [&](const Vec& u) {
        // f_j^{-1}(f_i(u))
        const Vec y = add(mat_vec(fi.matrix(), u, n), fi.offset(), n);
        return mat_vec(aj_inv, sub(y, fj.offset(), n), n);
    };
    const auto backward = [&](const Vec& w) {
        // f_i^{-1}(f_j(w))
        const Vec y = add(mat_vec(fj.matrix(), w, n), fj.offset(), n);
        return mat_vec(ai_inv, sub(y, fi.offset(), n), n);
    };
    for (const double eps : {0.05, 0.01, 1e-3, 1e-4, 1e-6, 1e-8}) {
        Vec lo = zero_vec();
        Vec hi = zero_vec();
        for (int k = 0; k < n; ++k) {
            lo[k] = v.lower()[k] + eps * v.width(k);
            hi[k] = v.upper()[k] - eps * v.width(k);
        }
        Vec u = v.center();
        for (int iter = 0; iter < 2000; ++iter) {
            const Vec w = clamp_to(forward(u), lo, hi, n);
            const Vec next = clamp_to(backward(w), lo, hi, n);
            double delta = 0.0;
            for (int k = 0; k < n; ++k) delta = std::max(delta, std::abs(next[k] - u[k]));
            u = next;
            if (delta < 1e-15) break;
        }
        if (inside(u, lo, hi, n) && inside(forward(u), lo, hi, n)) {
            return add(mat_vec(fi.matrix(), u, n), fi.offset(), n);
        }
    }
    return std::nullopt;
}

std::string pair_label(const FiniteIfs& system, int i, int j) {
    return system.name(i) + ", " + system.name(j);
}

}  // namespace

const char* OscResult::verdict_name() const {
    switch (verdict) {
        case Verdict::Satisfied: return "Satisfied";
        case Verdict::Violated: return "Violated";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

OscResult osc_check(const FiniteIfs& system, const SpaceBox& open_set) {
    const SpaceBox& space = system.space();
    if (open_set.dim() != space.dim() || !space.contains_box(open_set, kContainTol)) {
        throw IfsError(Errc::SpaceMismatch, "candidate open set is not contained in the space");
    }
    const int n = space.dim();
    OscResult result(open_set);

    // Containment: the image of V's closure is the convex hull of the vertex
    // images, so closure(f(V)) inside closure(V) reduces to vertex checks.
    for (int i = 0; i < system.size(); ++i) {
        const AffineContraction& f = system.map(i);
        for (int mask = 0; mask < open_set.vertex_count(); ++mask) {
            const Vec image = add(mat_vec(f.matrix(), open_set.vertex(mask), n), f.offset(), n);
            if (!open_set.contains(image, kContainTol)) {
                result.verdict = OscResult::Verdict::Violated;
                result.pair_first = i;
                result.has_witness = true;
                result.witness = image;
                result.detail = "image of " + system.name(i) +
                                " leaves the closure of the open set at " +
                                vec_to_string(image, n);
                return result;
            }
        }
    }

    std::optional<OscResult> unknown;
    for (int i = 0; i < system.size(); ++i) {
        for (int j = i + 1; j < system.size(); ++j) {
            const AffineContraction& fi = system.map(i);
            const AffineContraction& fj = system.map(j);
            const bool diag = is_diagonal(fi.matrix(), n) && is_diagonal(fj.matrix(), n);
            if (diag) {
                bool disjoint = false;
                std::array<AxisSet, 3> si{};
                std::array<AxisSet, 3> sj{};
                for (int k = 0; k < n; ++k) {
                    si[k] = axis_image(fi.matrix()[k][k], fi.offset()[k], open_set.lower()[k],
                                       open_set.upper()[k]);
                    sj[k] = axis_image(fj.matrix()[k][k], fj.offset()[k], open_set.lower()[k],
                                       open_set.upper()[k]);
                    if (axis_disjoint(si[k], sj[k])) disjoint = true;
                }
                if (disjoint) continue;
                result.verdict = OscResult::Verdict::Violated;
                result.pair_first = i;
                result.pair_second = j;
                result.has_witness = true;
                for (int k = 0; k < n; ++k) {
                    result.witness[k] = axis_overlap_mid(si[k], sj[k]);
                }
                result.detail = "images of " + pair_label(system, i, j) +
                                " overlap at " + vec_to_string(result.witness, n);
                return result;
            }
            const bool invertible = std::abs(det_dim(fi.matrix(), n)) > 1e-14 &&
                                    std::abs(det_dim(fj.matrix(), n)) > 1e-14;
            if (!invertible) {
                if (!unknown) {
                    OscResult u(open_set);
                    u.verdict = OscResult::Verdict::Unknown;
                    u.pair_first = i;
                    u.pair_second = j;
                    u.detail = "pair (" + pair_label(system, i, j) +
                               "): no exact disjointness path (non-diagonal singular matrix)";
                    unknown = std::move(u);
                }
                continue;
            }
            const Parallelotope pi = image_parallelotope(fi, open_set);
            const Parallelotope pj = image_parallelotope(fj, open_set);
            if (sat_disjoint(pi, pj, n)) continue;
            const std::optional<Vec> witness = interior_witness(fi, fj, open_set);
            if (witness) {
                result.verdict = OscResult::Verdict::Violated;
                result.pair_first = i;
                result.pair_second = j;
                result.has_witness = true;
                result.witness = *witness;
                result.detail = "images of " + pair_label(system, i, j) + " overlap at " +
                                vec_to_string(result.witness, n);
                return result;
            }
            if (!unknown) {
                OscResult u(open_set);
                u.verdict = OscResult::Verdict::Unknown;
                u.pair_first = i;
                u.pair_second = j;
                u.detail = "pair (" + pair_label(system, i, j) +
                           "): no separating axis, but no interior overlap point found "
                           "(images may touch only on boundaries)";
                unknown = std::move(u);
            }
        }
    }
    if (unknown) return *unknown;
    result.verdict = OscResult::Verdict::Satisfied;
    result.detail = std::to_string(system.size()) +
                    " maps: images inside the closure of the open set and pairwise disjoint";
    return result;
}

OscResult osc_check(const FiniteIfs& system) { return osc_check(system, system.space()); }

ShiftOscReport osc_preserved_under_shift(const IfsSequence& seq, const SpaceBox& open_set,
                                         std::uint64_t steps) {
    const FiniteIfs base_system = distinct_system(seq);
    OscResult base = osc_check(base_system, open_set);
    if (base.verdict != OscResult::Verdict::Satisfied) {
        throw IfsError(Errc::PrerequisiteFailed,
                       "open set condition not established for the base system: " + base.detail);
    }
    const IfsSequence shifted_seq = shift_n(seq, steps);
    const FiniteIfs shifted_system = distinct_system(shifted_seq);
    bool subset = true;
    for (int i = 0; i < shifted_system.size(); ++i) {
        bool found = false;
        for (int j = 0; j < base_system.size(); ++j) {
            if (shifted_system.map(i).same_coefficients(base_system.map(j))) {
                found = true;
                break;
            }
        }
        if (!found) {
            subset = false;
            break;
        }
    }
    OscResult shifted = osc_check(shifted_system, open_set);
    return ShiftOscReport{std::move(base), std::move(shifted), steps, subset};
}

}  // namespace ifs
