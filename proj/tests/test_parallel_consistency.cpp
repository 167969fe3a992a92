// Parallel kernels must be bit-identical to their serial references at any
// worker count. The serial implementations are the reference here; the
// parallel ones are only allowed to be faster.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ifs/raster.hpp"
#include "ifs/sequence.hpp"

#include "test_support.hpp"

using namespace ifs;
using namespace testsupport;

namespace {

// Runs the body at several thread counts when OpenMP is available,
// restoring the ambient setting afterwards.
template <typename Fn>
void at_thread_counts(Fn&& body) {
#ifdef _OPENMP
    const int ambient = omp_get_max_threads();
    for (int threads : {1, 2, 3, 7}) {
        omp_set_num_threads(threads);
        body();
    }
    omp_set_num_threads(ambient);
#else
    body();
#endif
}

FiniteIfs anisotropic_system() {
    // Wide box: exercises unequal pixel spacing in both kernels.
    const SpaceBox space(2, Vec{0.0, 0.0, 0.0}, Vec{3.0, 1.0, 0.0});
    Mat m = zero_mat();
    m[0][0] = 0.5;
    m[1][1] = 0.4;
    Mat m2 = m;
    m2[0][1] = 0.1;
    return FiniteIfs(space, {{"a", validate_contraction(space, m, Vec{0.1, 0.05, 0.0})},
                             {"b", validate_contraction(space, m2, Vec{1.4, 0.5, 0.0})}});
}

}  // namespace

TEST_CASE("hutchinson step is identical to the serial reference") {
    const auto systems = {sierpinski_system(), anisotropic_system()};
    for (const auto& system : systems) {
        const auto start = AttractorRaster::full(system.space(), 160);
        const auto reference = hutchinson_step_serial(start, system);
        at_thread_counts([&] { CHECK(hutchinson_step(start, system) == reference); });
        // Deeper rasters too, not just the dense first step.
        auto stage = reference;
        for (int i = 0; i < 3; ++i) stage = hutchinson_step_serial(stage, system);
        const auto deep = hutchinson_step_serial(stage, system);
        at_thread_counts([&] { CHECK(hutchinson_step(stage, system) == deep); });
    }
}

TEST_CASE("chaos game is identical to the serial reference across chunks") {
    const auto system = sierpinski_system();
    ChaosGameParams params;
    params.resolution = 192;
    params.seed = 1234;
    // One partial chunk, then several full 2^16-point chunks.
    for (std::uint64_t points : {30000ull, 70000ull, 250000ull}) {
        params.n_points = points;
        const auto reference = attractor_chaos_game_serial(system, params);
        at_thread_counts([&] { CHECK(attractor_chaos_game(system, params) == reference); });
    }
}

TEST_CASE("chaos game on a 1D system matches serially") {
    const SpaceBox space = unit_interval();
    const FiniteIfs cantor(space,
                           {{"c1", map1(space, 1.0 / 3.0, 0.0)}, {"c2", map1(space, 1.0 / 3.0, 2.0 / 3.0)}});
    ChaosGameParams params;
    params.resolution = 729;
    params.n_points = 100000;
    params.seed = 5;
    const auto reference = attractor_chaos_game_serial(cantor, params);
    at_thread_counts([&] { CHECK(attractor_chaos_game(cantor, params) == reference); });
}

TEST_CASE("deterministic renderer is reproducible") {
    const auto system = anisotropic_system();
    const auto first = attractor_deterministic(system, 128, 80);
    at_thread_counts([&] { CHECK(attractor_deterministic(system, 128, 80) == first); });
}

TEST_CASE("distance transform hausdorff is thread-count independent") {
    std::mt19937_64 g(2718);
    const SpaceBox space(2, Vec{0.0, 0.0, 0.0}, Vec{2.0, 1.0, 0.0});
    auto a = AttractorRaster::empty(space, 96);
    auto b = AttractorRaster::empty(space, 96);
    for (int n = 0; n < 300; ++n) {
        a.set(static_cast<int>(g() % 96), static_cast<int>(g() % 96));
        b.set(static_cast<int>(g() % 96), static_cast<int>(g() % 96));
    }
    const double brute = hausdorff_distance_brute(a, b);
    at_thread_counts([&] {
        CHECK(hausdorff_distance(a, b) == doctest::Approx(brute).epsilon(1e-12));
    });
}
