#include "ifs/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "ifs/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ifs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kChaosChunk = 1u << 16;

void require_rasterable(const SpaceBox& space) {
    if (space.dim() > 2) {
        throw IfsError(Errc::InvalidArgument, "rasters support 1D and 2D spaces only");
    }
}

}  // namespace

AttractorRaster::AttractorRaster(SpaceBox space, int resolution, std::uint8_t fill)
    : space_(std::move(space)), resolution_(resolution) {
    require_rasterable(space_);
    if (resolution_ < 2) {
        throw IfsError(Errc::InvalidArgument, "raster resolution must be at least 2");
    }
    const std::size_t cells =
        static_cast<std::size_t>(resolution_) * (space_.dim() == 1 ? 1 : resolution_);
    bits_.assign(cells, fill);
}

AttractorRaster AttractorRaster::empty(const SpaceBox& space, int resolution) {
    return AttractorRaster(space, resolution, 0);
}

AttractorRaster AttractorRaster::full(const SpaceBox& space, int resolution) {
    return AttractorRaster(space, resolution, 1);
}

std::int64_t AttractorRaster::occupied_count() const {
    std::int64_t n = 0;
    for (std::uint8_t b : bits_) n += b;
    return n;
}

Vec AttractorRaster::cell_center(int ix, int iy) const {
    Vec p{0.0, 0.0, 0.0};
    p[0] = space_.lower()[0] + (ix + 0.5) * (space_.width(0) / resolution_);
    if (space_.dim() == 2) {
        p[1] = space_.lower()[1] + (iy + 0.5) * (space_.width(1) / resolution_);
    }
    return p;
}

void AttractorRaster::cell_of(const Vec& p, int& ix, int& iy) const {
    const auto clamp_axis = [this](double coord, int axis) {
        const double rel = (coord - space_.lower()[axis]) / space_.width(axis);
        const int idx = static_cast<int>(std::floor(rel * resolution_));
        return std::clamp(idx, 0, resolution_ - 1);
    };
    ix = clamp_axis(p[0], 0);
    iy = space_.dim() == 2 ? clamp_axis(p[1], 1) : 0;
}

namespace {

// Maps every occupied cell of the input rows [row_begin, row_end) and stamps
// the cells met by the closed bounding box of its affine image into
// `out_bits`. The image of a cell box is f(center) +/- ext where
// ext_i = sum_j |A_ij| * halfwidth_j, the same for every cell, so the
// stamped set is exactly the cell cover of union_i f_i(occupied cells).
void hutchinson_rows(const AttractorRaster& raster, const FiniteIfs& system, int row_begin,
                     int row_end, std::vector<std::uint8_t>& out_bits) {
    const int w = raster.width();
    const int h = raster.height();
    const SpaceBox& space = raster.space();
    const int dim = space.dim();
    const int res = raster.resolution();

    std::vector<std::array<double, 2>> exts;
    exts.reserve(system.entries().size());
    for (const auto& entry : system.entries()) {
        const Mat& a = entry.second.matrix();
        std::array<double, 2> ext{0.0, 0.0};
        for (int i = 0; i < dim; ++i) {
            for (int j = 0; j < dim; ++j) {
                ext[static_cast<std::size_t>(i)] +=
                    std::abs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) *
                    (space.width(j) / res) * 0.5;
            }
        }
        exts.push_back(ext);
    }

    const auto cell_range = [&space, res](double lo, double hi, int axis, int limit, int& begin,
                                          int& end) {
        const double scale = res / space.width(axis);
        begin = std::clamp(
            static_cast<int>(std::floor((lo - space.lower()[axis]) * scale)), 0, limit - 1);
        end = std::clamp(static_cast<int>(std::floor((hi - space.lower()[axis]) * scale)), 0,
                         limit - 1);
    };

    for (int iy = row_begin; iy < row_end; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            if (!raster.test(ix, iy)) continue;
            const Vec c = raster.cell_center(ix, iy);
            for (std::size_t m = 0; m < system.entries().size(); ++m) {
                const Vec image = apply_unchecked(system.entries()[m].second, c);
                int x0 = 0;
                int x1 = 0;
                cell_range(image[0] - exts[m][0], image[0] + exts[m][0], 0, w, x0, x1);
                int y0 = 0;
                int y1 = 0;
                if (dim == 2) {
                    cell_range(image[1] - exts[m][1], image[1] + exts[m][1], 1, h, y0, y1);
                }
                for (int py = y0; py <= y1; ++py) {
                    for (int px = x0; px <= x1; ++px) {
                        out_bits[static_cast<std::size_t>(py) * w + px] = 1;
                    }
                }
            }
        }
    }
}

}  // namespace

AttractorRaster hutchinson_step_serial(const AttractorRaster& raster, const FiniteIfs& system) {
    if (raster.space() != system.space()) {
        throw IfsError(Errc::SpaceMismatch, "raster and system live on different spaces");
    }
    AttractorRaster out = AttractorRaster::empty(raster.space(), raster.resolution());
    hutchinson_rows(raster, system, 0, raster.height(), out.bits());
    return out;
}

AttractorRaster hutchinson_step(const AttractorRaster& raster, const FiniteIfs& system) {
#ifdef _OPENMP
    if (raster.space() != system.space()) {
        throw IfsError(Errc::SpaceMismatch, "raster and system live on different spaces");
    }
    AttractorRaster out = AttractorRaster::empty(raster.space(), raster.resolution());
    std::vector<std::uint8_t>& merged = out.bits();
    const int h = raster.height();
#pragma omp parallel
    {
        std::vector<std::uint8_t> local(merged.size(), 0);
#pragma omp for schedule(static) nowait
        for (int iy = 0; iy < h; ++iy) {
            hutchinson_rows(raster, system, iy, iy + 1, local);
        }
#pragma omp critical
        {
            for (std::size_t i = 0; i < merged.size(); ++i) merged[i] |= local[i];
        }
    }
    return out;
#else
    return hutchinson_step_serial(raster, system);
#endif
}

AttractorRaster attractor_deterministic(const FiniteIfs& system, int resolution, int max_iters,
                                        double stop_tol, RenderStats* stats) {
    require_rasterable(system.space());
    AttractorRaster current = AttractorRaster::full(system.space(), resolution);
    const double total = static_cast<double>(current.bits().size());
    RenderStats local;
    for (int iter = 0; iter < max_iters; ++iter) {
        AttractorRaster next = hutchinson_step(current, system);
        local.iterations = iter + 1;
        std::int64_t changed = 0;
        const auto& a = current.bits();
        const auto& b = next.bits();
        for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
        current = std::move(next);
        if (static_cast<double>(changed) <= stop_tol * total) {
            local.converged = true;
            break;
        }
    }
    if (stats != nullptr) *stats = local;
    return current;
}

namespace {

// One pseudo-random chunk of the chaos game. The stream is fully determined
// by chunk_seed, so chunks can be replayed in any order.
void chaos_chunk(const FiniteIfs& system, AttractorRaster& raster, std::uint64_t chunk_seed,
                 std::uint64_t plot_count, std::uint64_t burn_in) {
    std::mt19937_64 rng(chunk_seed);
    const std::size_t m = system.size();
    Vec p = system.space().center();
    const std::uint64_t total = burn_in + plot_count;
    for (std::uint64_t i = 0; i < total; ++i) {
        const auto r32 = static_cast<std::uint32_t>(rng() >> 32);
        const auto k = static_cast<std::size_t>((static_cast<std::uint64_t>(r32) * m) >> 32);
        p = apply_unchecked(system.map(static_cast<int>(k)), p);
        if (i >= burn_in) {
            int ix = 0;
            int iy = 0;
            raster.cell_of(p, ix, iy);
            raster.set(ix, iy);
        }
    }
}

std::uint64_t chaos_chunk_count(const ChaosGameParams& params) {
    return (params.n_points + kChaosChunk - 1) / kChaosChunk;
}

std::uint64_t chaos_chunk_points(const ChaosGameParams& params, std::uint64_t chunk) {
    const std::uint64_t begin = chunk * kChaosChunk;
    return std::min<std::uint64_t>(kChaosChunk, params.n_points - begin);
}

}  // namespace

AttractorRaster attractor_chaos_game_serial(const FiniteIfs& system,
                                            const ChaosGameParams& params) {
    require_rasterable(system.space());
    AttractorRaster out = AttractorRaster::empty(system.space(), params.resolution);
    const std::uint64_t chunks = chaos_chunk_count(params);
    for (std::uint64_t c = 0; c < chunks; ++c) {
        chaos_chunk(system, out, params.seed + c, chaos_chunk_points(params, c),
                    params.burn_in);
    }
    return out;
}

AttractorRaster attractor_chaos_game(const FiniteIfs& system, const ChaosGameParams& params) {
#ifdef _OPENMP
    require_rasterable(system.space());
    AttractorRaster out = AttractorRaster::empty(system.space(), params.resolution);
    std::vector<std::uint8_t>& merged = out.bits();
    const auto chunks = static_cast<std::int64_t>(chaos_chunk_count(params));
#pragma omp parallel
    {
        AttractorRaster local = AttractorRaster::empty(system.space(), params.resolution);
#pragma omp for schedule(static, 1) nowait
        for (std::int64_t c = 0; c < chunks; ++c) {
            chaos_chunk(system, local, params.seed + static_cast<std::uint64_t>(c),
                        chaos_chunk_points(params, static_cast<std::uint64_t>(c)),
                        params.burn_in);
        }
#pragma omp critical
        {
            const auto& bits = local.bits();
            for (std::size_t i = 0; i < merged.size(); ++i) merged[i] |= bits[i];
        }
    }
    return out;
#else
    return attractor_chaos_game_serial(system, params);
#endif
}

AttractorRaster dilate(const AttractorRaster& raster, int cells) {
    if (cells < 0) throw IfsError(Errc::InvalidArgument, "dilation radius must be nonnegative");
    AttractorRaster out = AttractorRaster::empty(raster.space(), raster.resolution());
    const int w = raster.width();
    const int h = raster.height();
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            if (!raster.test(ix, iy)) continue;
            const int y0 = std::max(0, iy - cells);
            const int y1 = std::min(h - 1, iy + cells);
            const int x0 = std::max(0, ix - cells);
            const int x1 = std::min(w - 1, ix + cells);
            for (int py = y0; py <= y1; ++py) {
                for (int px = x0; px <= x1; ++px) out.set(px, py);
            }
        }
    }
    return out;
}

bool raster_subset(const AttractorRaster& inner, const AttractorRaster& outer) {
    if (inner.space() != outer.space() || inner.resolution() != outer.resolution()) {
        throw IfsError(Errc::ResolutionMismatch,
                       "raster comparison requires matching space and resolution");
    }
    const auto& a = inner.bits();
    const auto& b = outer.bits();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] == 0) return false;
    }
    return true;
}

namespace {

// Lower envelope of the parabolas q -> (x - q)^2 + f[q] sampled at integer x.
// Entries with f[q] == kInf contribute no parabola.
void edt_1d(const double* f, double* d, int n, int* v, double* z) {
    int q0 = 0;
    while (q0 < n && f[q0] == kInf) ++q0;
    if (q0 == n) {
        std::fill(d, d + n, kInf);
        return;
    }
    int k = 0;
    v[0] = q0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = q0 + 1; q < n; ++q) {
        if (f[q] == kInf) continue;
        double s = 0.0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        const double dq = static_cast<double>(q) - p;
        d[q] = dq * dq + f[p];
    }
}

// Squared physical distance from every cell center to the nearest occupied
// cell center, row pass then column pass.
std::vector<double> squared_edt(const AttractorRaster& raster) {
    const int w = raster.width();
    const int h = raster.height();
    const double sx = raster.space().width(0) / raster.resolution();
    const double sx2 = sx * sx;
    std::vector<double> dist(static_cast<std::size_t>(w) * h, kInf);

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> f(std::max(w, h));
        std::vector<double> d(std::max(w, h));
        std::vector<int> v(std::max(w, h));
        std::vector<double> z(std::max(w, h) + 1);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int iy = 0; iy < h; ++iy) {
            for (int ix = 0; ix < w; ++ix) f[ix] = raster.test(ix, iy) ? 0.0 : kInf;
            edt_1d(f.data(), d.data(), w, v.data(), z.data());
            for (int ix = 0; ix < w; ++ix) {
                dist[static_cast<std::size_t>(iy) * w + ix] =
                    d[ix] == kInf ? kInf : d[ix] * sx2;
            }
        }
    }
    if (h == 1) return dist;

    const double sy = raster.space().width(1) / raster.resolution();
    const double sy2 = sy * sy;
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> f(h);
        std::vector<double> d(h);
        std::vector<int> v(h);
        std::vector<double> z(h + 1);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int ix = 0; ix < w; ++ix) {
            for (int iy = 0; iy < h; ++iy) {
                const double row = dist[static_cast<std::size_t>(iy) * w + ix];
                f[iy] = row == kInf ? kInf : row / sy2;
            }
            edt_1d(f.data(), d.data(), h, v.data(), z.data());
            for (int iy = 0; iy < h; ++iy) {
                dist[static_cast<std::size_t>(iy) * w + ix] =
                    d[iy] == kInf ? kInf : d[iy] * sy2;
            }
        }
    }
    return dist;
}

void require_comparable(const AttractorRaster& a, const AttractorRaster& b) {
    if (a.space() != b.space() || a.resolution() != b.resolution()) {
        throw IfsError(Errc::ResolutionMismatch,
                       "Hausdorff distance requires matching space and resolution");
    }
    if (a.occupied_count() == 0 || b.occupied_count() == 0) {
        throw IfsError(Errc::EmptyRaster, "Hausdorff distance of an empty raster is undefined");
    }
}

double directed_max(const AttractorRaster& from, const std::vector<double>& dist_to_other) {
    double worst = 0.0;
    const int w = from.width();
    const int h = from.height();
    for (int iy = 0; iy < h; ++iy) {
        for (int ix = 0; ix < w; ++ix) {
            if (!from.test(ix, iy)) continue;
            worst = std::max(worst, dist_to_other[static_cast<std::size_t>(iy) * w + ix]);
        }
    }
    return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const AttractorRaster& a, const AttractorRaster& b) {
    require_comparable(a, b);
    const std::vector<double> to_b = squared_edt(b);
    const std::vector<double> to_a = squared_edt(a);
    return std::max(directed_max(a, to_b), directed_max(b, to_a));
}

double hausdorff_distance_brute(const AttractorRaster& a, const AttractorRaster& b) {
    require_comparable(a, b);
    const auto collect = [](const AttractorRaster& r) {
        std::vector<Vec> pts;
        for (int iy = 0; iy < r.height(); ++iy) {
            for (int ix = 0; ix < r.width(); ++ix) {
                if (r.test(ix, iy)) pts.push_back(r.cell_center(ix, iy));
            }
        }
        return pts;
    };
    const std::vector<Vec> pa = collect(a);
    const std::vector<Vec> pb = collect(b);
    const int dim = a.space().dim();
    const auto directed = [dim](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        double worst = 0.0;
        for (const Vec& p : from) {
            double best = kInf;
            for (const Vec& q : to) best = std::min(best, norm2(sub(p, q, dim), dim));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(pa, pb), directed(pb, pa));
}

DimensionReport box_counting_dimension(const AttractorRaster& raster) {
    const int r = raster.resolution();
    if (r < 32 || (r & (r - 1)) != 0) {
        throw IfsError(Errc::InvalidArgument,
                       "box counting requires a power-of-two resolution of at least 32");
    }
    if (raster.occupied_count() == 0) {
        throw IfsError(Errc::EmptyRaster, "box counting of an empty raster is undefined");
    }
    const int w = raster.width();
    const int h = raster.height();
    std::vector<double> xs;
    std::vector<double> ys;
    for (int block = 4; block <= r / 4; block *= 2) {
        const int bw = w / block;
        const int bh = std::max(1, h / block);
        std::vector<std::uint8_t> hit(static_cast<std::size_t>(bw) * bh, 0);
        for (int iy = 0; iy < h; ++iy) {
            for (int ix = 0; ix < w; ++ix) {
                if (!raster.test(ix, iy)) continue;
                hit[static_cast<std::size_t>(iy / block) * bw + ix / block] = 1;
            }
        }
        std::int64_t count = 0;
        for (std::uint8_t v : hit) count += v;
        xs.push_back(-std::log(static_cast<double>(block)));
        ys.push_back(std::log(static_cast<double>(count)));
    }
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        ss += e * e;
    }
    DimensionReport report;
    report.s = slope;
    report.method = DimensionReport::Method::BoxCounting;
    report.residual = std::sqrt(ss / n);
    return report;
}

}  // namespace ifs
