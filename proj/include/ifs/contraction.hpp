#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifs/geometry.hpp"

namespace ifs {

// Affine self-map f(x) = Ax + b of a SpaceBox, certified contractive at
// construction. `ratio` is the spectral norm of A, which is the exact
// Lipschitz constant of f in the Euclidean metric.
class AffineContraction {
public:
    const Mat& matrix() const { return matrix_; }
    const Vec& offset() const { return offset_; }
    double ratio() const { return ratio_; }
    bool is_similarity() const { return similarity_; }
    const SpaceBox& space() const { return space_; }

    bool same_coefficients(const AffineContraction& other) const;

private:
    friend AffineContraction validate_contraction(const SpaceBox&, const Mat&, const Vec&);

    AffineContraction(SpaceBox space, const Mat& matrix, const Vec& offset, double ratio,
                      bool similarity)
        : space_(std::move(space)), matrix_(matrix), offset_(offset), ratio_(ratio),
          similarity_(similarity) {}

    SpaceBox space_;
    Mat matrix_;
    Vec offset_;
    double ratio_;
    bool similarity_;
};

// Certifies that x -> Ax + b is a contraction mapping the box into itself.
// Throws NotContractive when the spectral norm of A reaches 1, and
// EscapesSpace naming the first box vertex whose image leaves the box
// (the affine image of a box is the convex hull of its vertex images, so
// vertex containment is exact).
AffineContraction validate_contraction(const SpaceBox& space, const Mat& matrix,
                                       const Vec& offset);

// Evaluates f at a point of the space; the point is checked against the box.
Vec apply(const AffineContraction& f, const Vec& point);

// Evaluation without the containment check, for rendering loops whose points
// stay in the box by construction.
Vec apply_unchecked(const AffineContraction& f, const Vec& point);

// d_inf(f,g) = sup over the box of |f(x) - g(x)|. The difference map is
// affine, so the supremum of its norm over a box is attained at a vertex;
// the result is the exact max over the 2^N vertices.
double sup_distance(const AffineContraction& f, const AffineContraction& g,
                    const SpaceBox& space);

// Bounded remetrization d_inf / (1 + d_inf), always in [0,1).
double bounded_distance(const AffineContraction& f, const AffineContraction& g,
                        const SpaceBox& space);

// Finite named symbol set over one space. Symbols with identical
// coefficients are folded into one equivalence class (`distinct_id`), which
// is what sequence equality and periodicity are defined on.
class ContractionAlphabet {
public:
    ContractionAlphabet(SpaceBox space,
                        std::vector<std::pair<std::string, AffineContraction>> entries);

    int size() const { return static_cast<int>(entries_.size()); }
    const std::string& name(int index) const { return entries_[index].first; }
    const AffineContraction& map(int index) const { return entries_[index].second; }
    std::optional<int> find(std::string_view name) const;
    const SpaceBox& space() const { return space_; }

    int distinct_id(int index) const { return distinct_ids_[index]; }
    // Bounded distance between two symbols, from the precomputed table.
    double pair_bounded_distance(int i, int j) const { return table_[i * size() + j]; }

private:
    SpaceBox space_;
    std::vector<std::pair<std::string, AffineContraction>> entries_;
    std::vector<int> distinct_ids_;
    std::vector<double> table_;
};

using AlphabetPtr = std::shared_ptr<const ContractionAlphabet>;

}  // namespace ifs
