// Shift map, evolution operators, periodicity classification, and the
// distance identity under shifts.
//
// Oracle for the shift: the defining stream identity (shift F)_k = F_{k+1},
// checked term by term on long prefixes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ifs/dynamics.hpp"
#include "ifs/errors.hpp"
#include "ifs/sequence.hpp"

#include "test_support.hpp"

using namespace ifs;
using namespace testsupport;

namespace {

IfsSequence random_ep(std::mt19937_64& g, const AlphabetPtr& alphabet, int max_pre, int max_per) {
    const int m = alphabet->size();
    std::vector<int> pre, per;
    for (int i = 0, n = static_cast<int>(g() % static_cast<std::uint64_t>(max_pre + 1)); i < n; ++i)
        pre.push_back(static_cast<int>(g() % static_cast<std::uint64_t>(m)));
    for (int i = 0, n = 1 + static_cast<int>(g() % static_cast<std::uint64_t>(max_per)); i < n; ++i)
        per.push_back(static_cast<int>(g() % static_cast<std::uint64_t>(m)));
    return IfsSequence::eventually_periodic_ids(alphabet, pre, per);
}

}  // namespace

TEST_CASE("shift satisfies the stream identity") {
    const auto alphabet = sierpinski_alphabet();
    std::mt19937_64 g(1001);
    for (int trial = 0; trial < 30; ++trial) {
        const auto seq = random_ep(g, alphabet, 4, 6);
        const auto shifted = shift(seq);
        for (std::uint64_t k = 1; k <= 500; ++k) CHECK(shifted.symbol_at(k) == seq.symbol_at(k + 1));
    }
    const auto stream = IfsSequence::block_enumeration(alphabet, {"f1", "f2", "f3"});
    const auto shifted = shift(stream);
    CHECK(shifted.start_offset() == 1);
    for (std::uint64_t k = 1; k <= 2000; ++k) CHECK(shifted.symbol_at(k) == stream.symbol_at(k + 1));

    const auto offset7 = IfsSequence::block_enumeration(alphabet, {"f1", "f2", "f3"}, 7);
    const auto shifted7 = shift(offset7);
    for (std::uint64_t k = 1; k <= 2000; ++k)
        CHECK(shifted7.symbol_at(k) == offset7.symbol_at(k + 1));
}

TEST_CASE("shift_n equals n applications of shift") {
    const auto alphabet = sierpinski_alphabet();
    std::mt19937_64 g(1002);
    for (int trial = 0; trial < 20; ++trial) {
        const auto seq = random_ep(g, alphabet, 3, 5);
        IfsSequence iterated = seq;
        for (int n = 0; n <= 12; ++n) {
            const auto direct = shift_n(seq, static_cast<std::uint64_t>(n));
            CHECK(sequences_equal(direct, iterated).outcome == SeqCompare::Equal);
            iterated = shift(iterated);
        }
    }
}

TEST_CASE("shift consumes the preperiod then rotates the cycle") {
    const auto alphabet = sierpinski_alphabet();
    const auto seq = IfsSequence::eventually_periodic(alphabet, {"f3", "f3"}, {"f1", "f2"});
    const auto once = shift(seq);
    CHECK(once.preperiod() == std::vector<int>{2});
    const auto twice = shift_n(seq, 2);
    CHECK(twice.preperiod().empty());
    CHECK(twice.period() == std::vector<int>{0, 1});
    const auto thrice = shift_n(seq, 3);
    CHECK(thrice.period() == std::vector<int>{1, 0});
}

TEST_CASE("the four periodicity families are classified") {
    const auto alphabet = sierpinski_alphabet();

    const auto fixed = IfsSequence::eventually_periodic(alphabet, {}, {"f1"});
    auto report = classify_periodicity(fixed, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::Fixed);
    CHECK(report.period == 1);
    CHECK(report.describe() == "fixed");

    const auto periodic = IfsSequence::eventually_periodic(alphabet, {}, {"f1", "f2", "f3"});
    report = classify_periodicity(periodic, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::Periodic);
    CHECK(report.period == 3);

    const auto ev_fixed = IfsSequence::eventually_periodic(alphabet, {"f2", "f3", "f2"}, {"f1"});
    report = classify_periodicity(ev_fixed, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::EventuallyFixed);
    CHECK(report.preperiod == 3);

    const auto ev_periodic = IfsSequence::eventually_periodic(alphabet, {"f3"}, {"f1", "f2"});
    report = classify_periodicity(ev_periodic, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::EventuallyPeriodic);
    CHECK(report.preperiod == 1);
    CHECK(report.period == 2);
}

TEST_CASE("redundant representations classify by canonical form") {
    const auto alphabet = sierpinski_alphabet();
    // Doubled period and absorbable tail: still a fixed point of the shift.
    const auto seq = IfsSequence::eventually_periodic(alphabet, {"f1"}, {"f1", "f1"});
    const auto report = classify_periodicity(seq, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::Fixed);
    CHECK(report.period == 1);
    CHECK(report.preperiod == 0);
}

TEST_CASE("block enumeration streams are aperiodic up to the horizon") {
    const auto alphabet = sierpinski_alphabet();
    const auto stream = IfsSequence::block_enumeration(alphabet, {"f1", "f2", "f3"});
    const auto report = classify_periodicity(stream, 1000);
    CHECK(report.kind == PeriodicityReport::Kind::AperiodicUpTo);
    CHECK(report.horizon == 1000);
}

TEST_CASE("rotation systems return after n^2 shifts") {
    for (int n = 2; n <= 4; ++n) {
        // n symbols on the interval: maps x/(n+1) + i/(n+1).
        const SpaceBox space = unit_interval();
        std::vector<std::pair<std::string, AffineContraction>> entries;
        const double a = 1.0 / (n + 1);
        for (int i = 0; i < n; ++i)
            entries.emplace_back("m" + std::to_string(i), map1(space, a, a * i));
        auto alphabet = std::make_shared<const ContractionAlphabet>(space, entries);
        // Period = all n rotations of (0,1,...,n-1) concatenated, length n^2.
        std::vector<int> period;
        for (int r = 0; r < n; ++r)
            for (int i = 0; i < n; ++i) period.push_back((r + i) % n);
        const auto seq = IfsSequence::eventually_periodic_ids(alphabet, {}, period);
        const auto back = shift_n(seq, static_cast<std::uint64_t>(n) * n);
        CHECK(sequences_equal(back, seq).outcome == SeqCompare::Equal);
        // One block is not enough for n >= 2: the next rotation differs.
        const auto part = shift_n(seq, static_cast<std::uint64_t>(n));
        CHECK(sequences_equal(part, seq).outcome == SeqCompare::NotEqual);
    }
}

TEST_CASE("periodic truncations approximate any sequence (density)") {
    const auto alphabet = sierpinski_alphabet();
    std::mt19937_64 g(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const IfsSequence seq =
            trial % 5 == 0
                ? IfsSequence::block_enumeration(alphabet, {"f1", "f2", "f3"},
                                                 static_cast<std::uint64_t>(trial))
                : random_ep(g, alphabet, 3, 5);
        for (int n = 1; n <= 12; ++n) {
            const auto approx = periodic_truncation(seq, static_cast<std::uint64_t>(n));
            CHECK(approx.preperiod().empty());
            for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(n); ++k)
                CHECK(alphabet->distinct_id(approx.symbol_at(k)) ==
                      alphabet->distinct_id(seq.symbol_at(k)));
            const auto report = sequence_distance(seq, approx);
            CHECK(report.value + report.tail_bound < std::pow(2.0, -n));
        }
    }
}

TEST_CASE("shift doubles the distance up to the first term") {
    const auto alphabet = sierpinski_alphabet();

    // Equal sequences: both sides of the identity vanish.
    const auto same = IfsSequence::eventually_periodic(alphabet, {}, {"f1", "f2"});
    CHECK(sequence_distance(same, same).value == 0.0);
    CHECK(sequence_distance(shift(same), shift(same)).value == 0.0);

    // Differing only at index 1: the shifted distance is 0 and the series
    // has a single term, so 2 D(F,G) equals the bounded distance exactly.
    const auto from_f1 = IfsSequence::eventually_periodic(alphabet, {"f1"}, {"f3"});
    const auto from_f2 = IfsSequence::eventually_periodic(alphabet, {"f2"}, {"f3"});
    CHECK(sequence_distance(shift(from_f1), shift(from_f2)).value == 0.0);
    CHECK(2.0 * sequence_distance(from_f1, from_f2).value ==
          doctest::Approx(alphabet->pair_bounded_distance(alphabet->find("f1").value(),
                                                          alphabet->find("f2").value()))
              .epsilon(1e-15));

    std::mt19937_64 g(777);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_ep(g, alphabet, 3, 5);
        const auto h = random_ep(g, alphabet, 3, 5);
        const auto report = shift_distance_identity(f, h, 1e-10);
        CHECK(report.identity_ok);
        CHECK(report.doubling_bound_ok);
        // Cross-check the residual against a direct recomputation.
        const double lhs = sequence_distance(shift(f), shift(h)).value;
        const double rhs = 2.0 * sequence_distance(f, h).value -
                           alphabet->pair_bounded_distance(f.symbol_at(1), h.symbol_at(1));
        CHECK(report.identity_residual == doctest::Approx(std::abs(lhs - rhs)).epsilon(1e-12));
    }
}

TEST_CASE("discrete shifts compose exactly") {
    const auto alphabet = sierpinski_alphabet();
    const EvolutionOperator op{EvolutionOperator::Kind::ShiftDiscrete};
    std::mt19937_64 g(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto seq = random_ep(g, alphabet, 3, 5);
        const double t1 = static_cast<double>(g() % 40);
        const double t2 = static_cast<double>(g() % 40);
        const auto report = verify_group_property(op, seq, t1, t2, 0.0);
        CHECK(report.identity_ok);
        CHECK(report.composition_ok);
        CHECK(report.max_coefficient_diff == 0.0);
    }
}

TEST_CASE("exponential scalings compose within floating error") {
    const auto alphabet = interval_alphabet();
    const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
    std::mt19937_64 g(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto seq = random_ep(g, alphabet, 2, 4);
        const double t1 = uniform(g, 0.0, 1.5);
        const double t2 = uniform(g, 0.0, 1.5);
        const auto report = verify_group_property(op, seq, t1, t2, 1e-12);
        CHECK(report.identity_ok);
        CHECK(report.composition_ok);
        CHECK(report.pass());
    }
}

TEST_CASE("exponential scaling at t=ln 2 quarters the half maps") {
    const auto alphabet = interval_alphabet();
    const auto seq = IfsSequence::eventually_periodic(alphabet, {}, {"h1", "h2"});
    const EvolutionOperator op{EvolutionOperator::Kind::ScaleExp};
    const auto evolved = evolve(op, seq, std::log(2.0));
    const auto& f1 = evolved.map_at(1);
    const auto& f2 = evolved.map_at(2);
    CHECK(f1.matrix()[0][0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f1.offset()[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f2.matrix()[0][0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f2.offset()[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(op.ratio_action(0.5, std::log(2.0)) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("evolution at time zero is the identity") {
    const auto alphabet = interval_alphabet();
    std::mt19937_64 g(33);
    for (int trial = 0; trial < 20; ++trial) {
        const auto seq = random_ep(g, alphabet, 2, 4);
        for (const auto kind :
             {EvolutionOperator::Kind::ShiftDiscrete, EvolutionOperator::Kind::ScaleExp}) {
            const EvolutionOperator op{kind};
            const auto same = evolve(op, seq, 0.0);
            CHECK(sequences_equal(same, seq).outcome == SeqCompare::Equal);
        }
    }
}

TEST_CASE("discrete evolution matches the iterated shift") {
    const auto alphabet = sierpinski_alphabet();
    const EvolutionOperator op{EvolutionOperator::Kind::ShiftDiscrete};
    const auto stream = IfsSequence::block_enumeration(alphabet, {"f1", "f2", "f3"});
    for (int n = 0; n <= 50; n += 10) {
        const auto evolved = evolve(op, stream, static_cast<double>(n));
        const auto shifted = shift_n(stream, static_cast<std::uint64_t>(n));
        CHECK(evolved.start_offset() == shifted.start_offset());
    }
}

TEST_CASE("evolution domain errors") {
    const auto alphabet = interval_alphabet();
    const auto seq = IfsSequence::eventually_periodic(alphabet, {}, {"h1"});

    const EvolutionOperator discrete{EvolutionOperator::Kind::ShiftDiscrete};
    try {
        (void)evolve(discrete, seq, 0.5);
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::TimeOutsideDomain);
    }

    const EvolutionOperator scale{EvolutionOperator::Kind::ScaleExp};
    try {
        (void)evolve(scale, seq, -1.0);
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::TimeOutsideDomain);
    }

    // A box missing the origin cannot host the scaling family.
    const SpaceBox off_box(1, Vec{1.0, 0.0, 0.0}, Vec{2.0, 0.0, 0.0});
    Mat m = zero_mat();
    m[0][0] = 0.3;
    const auto f = validate_contraction(off_box, m, Vec{1.0, 0.0, 0.0});
    auto off_alphabet = std::make_shared<const ContractionAlphabet>(
        off_box, std::vector<std::pair<std::string, AffineContraction>>{{"f", f}});
    const auto off_seq = IfsSequence::eventually_periodic(off_alphabet, {}, {"f"});
    try {
        (void)evolve(scale, off_seq, 0.5);
        CHECK(false);
    } catch (const IfsError& e) {
        CHECK(e.code() == Errc::OriginNotInSpace);
    }
}
