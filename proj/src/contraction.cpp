#include "ifs/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ifs {

namespace {
constexpr double kContainTol = 1e-12;
}

bool AffineContraction::same_coefficients(const AffineContraction& other) const {
    if (space_.dim() != other.space_.dim()) return false;
    const int n = space_.dim();
    for (int i = 0; i < n; ++i) {
        if (offset_[i] != other.offset_[i]) return false;
        for (int j = 0; j < n; ++j)
            if (matrix_[i][j] != other.matrix_[i][j]) return false;
    }
    return true;
}

AffineContraction validate_contraction(const SpaceBox& space, const Mat& matrix,
                                       const Vec& offset) {
    const int n = space.dim();
    const double ratio = spectral_norm(matrix, n);
    if (!(ratio < 1.0))
        throw IfsError(Errc::NotContractive,
                       "spectral norm " + std::to_string(ratio) + " is not below 1");

    for (int mask = 0; mask < space.vertex_count(); ++mask) {
        const Vec v = space.vertex(mask);
        const Vec image = add(mat_vec(matrix, v, n), offset, n);
        if (!space.contains(image, kContainTol))
            throw IfsError(Errc::EscapesSpace, "image of vertex " + vec_to_string(v, n) +
                                                   " is " + vec_to_string(image, n) +
                                                   ", outside the space");
    }

    // Zero entries beyond the active dimension so coefficient comparison
    // and hashing see a canonical value.
    Mat m = zero_mat();
    Vec b = zero_vec();
    for (int i = 0; i < n; ++i) {
        b[i] = offset[i];
        for (int j = 0; j < n; ++j) m[i][j] = matrix[i][j];
    }
    return AffineContraction(space, m, b, ratio, is_similarity_matrix(m, n));
}

Vec apply(const AffineContraction& f, const Vec& point) {
    const int n = f.space().dim();
    if (!f.space().contains(point, kContainTol))
        throw IfsError(Errc::PointOutsideSpace,
                       "point " + vec_to_string(point, n) + " is outside the space");
    return add(mat_vec(f.matrix(), point, n), f.offset(), n);
}

Vec apply_unchecked(const AffineContraction& f, const Vec& point) {
    const int n = f.space().dim();
    return add(mat_vec(f.matrix(), point, n), f.offset(), n);
}

double sup_distance(const AffineContraction& f, const AffineContraction& g,
                    const SpaceBox& space) {
    if (f.space() != space || g.space() != space)
        throw IfsError(Errc::SpaceMismatch, "contractions validated on different spaces");
    const int n = space.dim();
    Mat dm = zero_mat();
    Vec db = zero_vec();
    for (int i = 0; i < n; ++i) {
        db[i] = f.offset()[i] - g.offset()[i];
        for (int j = 0; j < n; ++j) dm[i][j] = f.matrix()[i][j] - g.matrix()[i][j];
    }
    double best = 0.0;
    for (int mask = 0; mask < space.vertex_count(); ++mask) {
        const Vec v = space.vertex(mask);
        best = std::max(best, norm2(add(mat_vec(dm, v, n), db, n), n));
    }
    return best;
}

double bounded_distance(const AffineContraction& f, const AffineContraction& g,
                        const SpaceBox& space) {
    const double d = sup_distance(f, g, space);
    return d / (1.0 + d);
}

ContractionAlphabet::ContractionAlphabet(
    SpaceBox space, std::vector<std::pair<std::string, AffineContraction>> entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    if (entries_.empty())
        throw IfsError(Errc::ValidationError, "alphabet must have at least one entry");

    std::set<std::string> seen;
    for (const auto& [name, map] : entries_) {
        if (!seen.insert(name).second)
            throw IfsError(Errc::ValidationError, "duplicate alphabet name '" + name + "'");
        if (map.space() != space_)
            throw IfsError(Errc::SpaceMismatch,
                           "alphabet entry '" + name + "' validated on a different space");
    }

    const int m = size();
    distinct_ids_.resize(m);
    for (int i = 0; i < m; ++i) {
        distinct_ids_[i] = i;
        for (int j = 0; j < i; ++j) {
            if (entries_[i].second.same_coefficients(entries_[j].second)) {
                distinct_ids_[i] = distinct_ids_[j];
                break;
            }
        }
    }

    table_.resize(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) {
            const double d = bounded_distance(entries_[i].second, entries_[j].second, space_);
            table_[i * m + j] = d;
            table_[j * m + i] = d;
        }
}

std::optional<int> ContractionAlphabet::find(std::string_view name) const {
    for (int i = 0; i < size(); ++i)
        if (entries_[i].first == name) return i;
    return std::nullopt;
}

}  // namespace ifs
