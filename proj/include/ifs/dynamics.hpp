#pragma once

#include <cstdint>
#include <string>

#include "ifs/sequence.hpp"

namespace ifs {

// Evolution operator on the sequence space. Two concrete families:
//   ShiftDiscrete - n-fold right shift, time domain {0,1,2,...}
//   ScaleExp      - every map scaled by e^{-t}, time domain [0,inf)
struct EvolutionOperator {
    enum class Kind { ShiftDiscrete, ScaleExp };
    Kind kind = Kind::ShiftDiscrete;

    // Action on a contraction ratio after time t.
    double ratio_action(double ratio, double t) const;
    const char* kind_name() const;
};

// Drops the head of the stream: index(shift(F), k) == index(F, k+1).
IfsSequence shift(const IfsSequence& seq);

// n-fold shift in O(1) for any n (period rotation modulo period length).
IfsSequence shift_n(const IfsSequence& seq, std::uint64_t n);

IfsSequence evolve(const EvolutionOperator& op, const IfsSequence& seq, double t);

struct GroupPropertyReport {
    bool identity_ok = false;     // phi(F,0) == F, exact
    bool composition_ok = false;  // phi(F,t1+t2) == phi(phi(F,t1),t2) within tol
    double max_coefficient_diff = 0.0;
    bool pass() const { return identity_ok && composition_ok; }
};

// Checks phi(F,0)=F exactly and the composition law coefficient-wise.
// ShiftDiscrete composes exactly; ScaleExp within floating-point slack.
GroupPropertyReport verify_group_property(const EvolutionOperator& op, const IfsSequence& seq,
                                          double t1, double t2, double tol);

struct PeriodicityReport {
    enum class Kind { Fixed, Periodic, EventuallyFixed, EventuallyPeriodic, AperiodicUpTo };
    Kind kind;
    std::uint64_t preperiod = 0;  // minimal preperiod length k
    std::uint64_t period = 0;     // minimal period p
    std::uint64_t horizon = 0;    // AperiodicUpTo only
    // Shift count after which the canonical form recurs, plus the form itself.
    std::uint64_t witness_shift = 0;
    std::string witness;

    std::string describe() const;
};

// Exact classification for eventually periodic inputs (from the canonical
// form); generated inputs are checked against every period up to `horizon`
// on a prefix of length 3*horizon before reporting AperiodicUpTo.
PeriodicityReport classify_periodicity(const IfsSequence& seq, std::uint64_t horizon);

// The purely periodic sequence repeating F's first n symbols. Agrees with F
// on the first n entries, so D(F, result) < 2^-n.
IfsSequence periodic_truncation(const IfsSequence& seq, std::uint64_t n);

struct ShiftIdentityReport {
    DistanceReport distance;        // D(F,G)
    DistanceReport shifted;         // D(shift F, shift G)
    double first_term = 0.0;        // bounded distance of the two head symbols
    double identity_residual = 0.0; // |D(nF,nG) - (2 D(F,G) - first_term)|
    double slack = 0.0;
    bool identity_ok = false;
    bool doubling_bound_ok = false; // D(nF,nG) <= 2 D(F,G)
    bool pass() const { return identity_ok && doubling_bound_ok; }
};

// Verifies D(shift F, shift G) = 2 D(F,G) - bounded_distance(f1,g1) within
// 2*tail_bound + tol, plus the doubling bound the continuity proof rests on.
ShiftIdentityReport shift_distance_identity(const IfsSequence& f, const IfsSequence& g,
                                            double tol, double tolerance = 0x1p-40);

}  // namespace ifs
