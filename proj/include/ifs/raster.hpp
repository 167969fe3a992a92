#pragma once

#include <cstdint>
#include <vector>

#include "ifs/dimension.hpp"
#include "ifs/sequence.hpp"

namespace ifs {

// Occupancy grid over a 1D or 2D SpaceBox, `resolution` cells per axis.
// Cell semantics are cell-center based: a cell is identified with its center
// point for mapping and distance purposes.
class AttractorRaster {
public:
    static AttractorRaster empty(const SpaceBox& space, int resolution);
    static AttractorRaster full(const SpaceBox& space, int resolution);

    const SpaceBox& space() const { return space_; }
    int resolution() const { return resolution_; }
    int width() const { return resolution_; }
    int height() const { return space_.dim() == 1 ? 1 : resolution_; }
    double pixel_diameter() const { return space_.diagonal() / resolution_; }

    bool test(int ix, int iy) const { return bits_[index(ix, iy)] != 0; }
    void set(int ix, int iy) { bits_[index(ix, iy)] = 1; }
    std::int64_t occupied_count() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    Vec cell_center(int ix, int iy) const;
    // Cell index of a point of the space, clamped to the grid.
    void cell_of(const Vec& p, int& ix, int& iy) const;

    bool operator==(const AttractorRaster& other) const = default;

private:
    AttractorRaster(SpaceBox space, int resolution, std::uint8_t fill);
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * resolution_ + ix;
    }

    SpaceBox space_;
    int resolution_;
    std::vector<std::uint8_t> bits_;
};

// One application of the set map A -> union of f_i(A) at raster granularity:
// every cell met by the closed bounding box of an occupied cell's affine
// image is stamped, which keeps the rendered set a superset of the true
// image while staying within one cell of it.
AttractorRaster hutchinson_step(const AttractorRaster& raster, const FiniteIfs& system);
AttractorRaster hutchinson_step_serial(const AttractorRaster& raster, const FiniteIfs& system);

struct RenderStats {
    int iterations = 0;
    bool converged = false;
};

// Iterates hutchinson_step from the full-space raster until the occupancy
// set stops changing (or changes by at most a stop_tol fraction of cells).
AttractorRaster attractor_deterministic(const FiniteIfs& system, int resolution,
                                        int max_iters = 100, double stop_tol = 0.0,
                                        RenderStats* stats = nullptr);

struct ChaosGameParams {
    int resolution = 512;
    std::uint64_t n_points = 1000000;
    std::uint64_t seed = 42;
    std::uint64_t burn_in = 64;
};

// Stochastic rendering. The point budget is split into fixed-size chunks;
// chunk c runs an independent mt19937_64 stream seeded with seed + c, and
// map selection takes the generator's top 32 bits scaled to the map count.
// The chunk decomposition depends only on n_points, so rasters are
// bit-identical for any thread count.
AttractorRaster attractor_chaos_game(const FiniteIfs& system, const ChaosGameParams& params);
AttractorRaster attractor_chaos_game_serial(const FiniteIfs& system,
                                            const ChaosGameParams& params);

// Chebyshev dilation by `cells`.
AttractorRaster dilate(const AttractorRaster& raster, int cells = 1);

// True when every occupied cell of `inner` is occupied in `outer`.
bool raster_subset(const AttractorRaster& inner, const AttractorRaster& outer);

// Symmetric Hausdorff distance between the occupied cell-center sets, via an
// exact two-pass Euclidean distance transform.
double hausdorff_distance(const AttractorRaster& a, const AttractorRaster& b);
// Quadratic-time reference.
double hausdorff_distance_brute(const AttractorRaster& a, const AttractorRaster& b);

// Least-squares slope of log N(eps) against log(1/eps) over dyadic block
// sizes, skipping the two finest and two coarsest levels.
DimensionReport box_counting_dimension(const AttractorRaster& raster);

}  // namespace ifs
