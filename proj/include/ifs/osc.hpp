#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ifs/dynamics.hpp"
#include "ifs/sequence.hpp"

namespace ifs {

// Outcome of checking a candidate open set V (the interior of a box) against
// the open set condition: every image f_i(V) inside V's closure, and the open
// images pairwise disjoint.
struct OscResult {
    enum class Verdict { Satisfied, Violated, Unknown };

    explicit OscResult(SpaceBox v) : open_set(std::move(v)) {}

    Verdict verdict = Verdict::Unknown;
    // Offending map indices. An overlap names both; a containment failure
    // names one and leaves pair_second at -1.
    int pair_first = -1;
    int pair_second = -1;
    bool has_witness = false;
    // Overlap: a point interior to both images. Containment failure: the
    // escaping vertex image.
    Vec witness = zero_vec();
    SpaceBox open_set;
    std::string detail;

    const char* verdict_name() const;
};

// Checks the open set condition with V = the interior of `open_set`.
// Containment is exact (vertex images of the closure). Disjointness is exact
// on two paths: both matrices diagonal (interval arithmetic with open or
// degenerate intervals) or both nonsingular (separating-axis test on the
// image parallelotopes, touching counted as disjoint since the images are
// open). Pairs outside both paths yield Unknown.
OscResult osc_check(const FiniteIfs& system, const SpaceBox& open_set);
// Same with V = the interior of the system's space.
OscResult osc_check(const FiniteIfs& system);

struct ShiftOscReport {
    OscResult base;
    OscResult shifted;
    std::uint64_t steps = 0;
    // The shifted stream's distinct maps all appear in the base system.
    bool subset_ok = false;

    bool pass() const {
        return subset_ok && shifted.verdict == OscResult::Verdict::Satisfied;
    }
};

// The open set condition survives the shift: the distinct system of
// shift^n(F) is a subset of the distinct system of F, so the same V works.
// Requires osc_check(distinct_system(F), V) to be Satisfied.
ShiftOscReport osc_preserved_under_shift(const IfsSequence& seq, const SpaceBox& open_set,
                                         std::uint64_t steps);

}  // namespace ifs
