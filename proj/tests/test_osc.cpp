// Open set condition checking and its preservation under the shift.
//
// Violated verdicts must carry a witness; every witness produced here is
// re-validated against the map images by direct computation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ifs/dynamics.hpp"
#include "ifs/errors.hpp"
#include "ifs/osc.hpp"
#include "ifs/sequence.hpp"

#include "test_support.hpp"

using namespace ifs;
using namespace testsupport;

namespace {

FiniteIfs overlap_pair() {
    const SpaceBox space = unit_interval();
    return FiniteIfs(space, {{"o1", map1(space, 0.6, 0.0)}, {"o2", map1(space, 0.6, 0.4)}});
}

// Four half-scale maps tiling the unit square by quadrants.
FiniteIfs quadrant_system() {
    const SpaceBox space = unit_square();
    return FiniteIfs(space, {{"q1", map2(space, 0.5, 0.0, 0.0)},
                             {"q2", map2(space, 0.5, 0.5, 0.0)},
                             {"q3", map2(space, 0.5, 0.0, 0.5)},
                             {"q4", map2(space, 0.5, 0.5, 0.5)}});
}

AffineContraction rotated_map(const SpaceBox& space, double scale, double angle, double bx,
                              double by) {
    Mat m = zero_mat();
    m[0][0] = scale * std::cos(angle);
    m[0][1] = -scale * std::sin(angle);
    m[1][0] = scale * std::sin(angle);
    m[1][1] = scale * std::cos(angle);
    return validate_contraction(space, m, Vec{bx, by, 0.0});
}

// Preimage under f(x) = s R(a) x + b, i.e. R(-a)/s applied to (x - b).
Vec rotated_preimage(double scale, double angle, double bx, double by, const Vec& p) {
    const double dx = p[0] - bx;
    const double dy = p[1] - by;
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec{(c * dx + s * dy) / scale, (-s * dx + c * dy) / scale, 0.0};
}

}  // namespace

TEST_CASE("sierpinski satisfies the condition on the unit square interior") {
    const auto system = sierpinski_system();
    const auto result = osc_check(system);
    CHECK(result.verdict == OscResult::Verdict::Satisfied);
    CHECK(std::string(result.verdict_name()) == "Satisfied");
    CHECK(result.open_set == system.space());
}

TEST_CASE("the 0.6-overlap pair is violated with an interior witness") {
    const auto system = overlap_pair();
    const auto result = osc_check(system);
    CHECK(result.verdict == OscResult::Verdict::Violated);
    CHECK(result.pair_first == 0);
    CHECK(result.pair_second == 1);
    REQUIRE(result.has_witness);
    // Image intervals are (0, 0.6) and (0.4, 1.0); the witness must sit in
    // the overlap.
    CHECK(result.witness[0] > 0.4);
    CHECK(result.witness[0] < 0.6);
}

TEST_CASE("a single map satisfies the condition vacuously") {
    const SpaceBox space = unit_interval();
    const FiniteIfs system(space, {{"f", map1(space, 0.37, 0.2)}});
    CHECK(osc_check(system).verdict == OscResult::Verdict::Satisfied);
}

TEST_CASE("subsets of a satisfied system stay satisfied") {
    const auto full = sierpinski_system();
    const auto& entries = full.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        for (std::size_t j = i + 1; j < entries.size(); ++j) {
            const FiniteIfs pair(full.space(), {entries[i], entries[j]});
            CHECK(osc_check(pair).verdict == OscResult::Verdict::Satisfied);
        }
    }
}

TEST_CASE("an open set escaping a map image is a containment violation") {
    const auto system = sierpinski_system();
    const SpaceBox small(2, Vec{0.0, 0.0, 0.0}, Vec{0.5, 0.5, 0.0});
    const auto result = osc_check(system, small);
    CHECK(result.verdict == OscResult::Verdict::Violated);
    // f2 shifts by 0.5 and leaves [0,0.5]^2; the report names only that map.
    CHECK(result.pair_first == 1);
    CHECK(result.pair_second == -1);
    REQUIRE(result.has_witness);
    CHECK_FALSE(small.contains(result.witness, 1e-9));
}

TEST_CASE("candidate sets outside the space are rejected") {
    const auto system = sierpinski_system();
    const SpaceBox outside(2, Vec{0.0, 0.0, 0.0}, Vec{2.0, 2.0, 0.0});
    try {
        (void)osc_check(system, outside);
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::SpaceMismatch);
    }
}

TEST_CASE("separated rotated squares are satisfied") {
    const SpaceBox space(2, Vec{-1.0, -1.0, 0.0}, Vec{1.0, 1.0, 0.0});
    const double a = 0.25 * std::acos(-1.0);
    const FiniteIfs system(space, {{"r1", rotated_map(space, 0.3, a, -0.5, 0.0)},
                                   {"r2", rotated_map(space, 0.3, a, 0.5, 0.0)}});
    const auto result = osc_check(system);
    CHECK(result.verdict == OscResult::Verdict::Satisfied);
}

TEST_CASE("overlapping rotated squares are violated with a double-interior witness") {
    const SpaceBox space(2, Vec{-1.0, -1.0, 0.0}, Vec{1.0, 1.0, 0.0});
    const double a = 0.25 * std::acos(-1.0);
    const FiniteIfs system(space, {{"r1", rotated_map(space, 0.3, a, -0.2, 0.0)},
                                   {"r2", rotated_map(space, 0.3, a, 0.2, 0.0)}});
    const auto result = osc_check(system);
    CHECK(result.verdict == OscResult::Verdict::Violated);
    CHECK(result.pair_first == 0);
    CHECK(result.pair_second == 1);
    REQUIRE(result.has_witness);
    // Pull the witness back through both maps; it must be interior to the
    // open square both times.
    const Vec u = rotated_preimage(0.3, a, -0.2, 0.0, result.witness);
    const Vec v = rotated_preimage(0.3, a, 0.2, 0.0, result.witness);
    for (const Vec& p : {u, v}) {
        CHECK(p[0] > -1.0);
        CHECK(p[0] < 1.0);
        CHECK(p[1] > -1.0);
        CHECK(p[1] < 1.0);
    }
}

TEST_CASE("pairs outside both exact paths come back unknown") {
    const SpaceBox space = unit_square();
    Mat flat = zero_mat();
    flat[0][0] = 0.3;
    flat[0][1] = 0.3;
    const auto collapse = validate_contraction(space, flat, Vec{0.1, 0.2, 0.0});
    const FiniteIfs system(space, {{"flat", collapse}, {"d", map2(space, 0.3, 0.0, 0.5)}});
    const auto result = osc_check(system);
    CHECK(result.verdict == OscResult::Verdict::Unknown);
    CHECK_FALSE(result.has_witness);
}

TEST_CASE("shift preserves the condition along the sierpinski embedding") {
    const auto seq = embed_finite(sierpinski_system());
    const SpaceBox space = seq.alphabet()->space();
    for (std::uint64_t n : {0ull, 1ull, 2ull, 5ull}) {
        const auto report = osc_preserved_under_shift(seq, space, n);
        CHECK(report.steps == n);
        CHECK(report.base.verdict == OscResult::Verdict::Satisfied);
        CHECK(report.shifted.verdict == OscResult::Verdict::Satisfied);
        CHECK(report.subset_ok);
        CHECK(report.pass());
    }
}

TEST_CASE("shifting off the preperiod shrinks the system but keeps the condition") {
    const auto quad = quadrant_system();
    auto alphabet = std::make_shared<const ContractionAlphabet>(quad.space(), quad.entries());
    // q4 appears only before the cycle; one shift drops it.
    const auto seq = IfsSequence::eventually_periodic(alphabet, {"q4"}, {"q1", "q2", "q3"});
    CHECK(distinct_system(seq).size() == 4);
    const auto report = osc_preserved_under_shift(seq, quad.space(), 1);
    CHECK(report.pass());
    const auto shifted = shift(seq);
    CHECK(distinct_system(shifted).size() == 3);
}

TEST_CASE("shift preservation needs a satisfied base system") {
    const auto system = overlap_pair();
    auto alphabet = std::make_shared<const ContractionAlphabet>(system.space(), system.entries());
    const auto seq = IfsSequence::eventually_periodic(alphabet, {}, {"o1", "o2"});
    try {
        (void)osc_preserved_under_shift(seq, system.space(), 1);
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::PrerequisiteFailed);
    }
}
