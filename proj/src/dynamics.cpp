#include "ifs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ifs {

double EvolutionOperator::ratio_action(double ratio, double t) const {
    return kind == Kind::ShiftDiscrete ? ratio : std::exp(-t) * ratio;
}

const char* EvolutionOperator::kind_name() const {
    return kind == Kind::ShiftDiscrete ? "shift-discrete" : "scale-exp";
}

IfsSequence shift(const IfsSequence& seq) { return shift_n(seq, 1); }

IfsSequence shift_n(const IfsSequence& seq, std::uint64_t n) {
    if (seq.kind() == IfsSequence::Kind::BlockEnumeration) {
        if (seq.start_offset() > std::numeric_limits<std::uint64_t>::max() - n)
            throw IfsError(Errc::TimeOutsideDomain, "shift count overflows the stream offset");
        std::vector<std::string> names;
        for (int s : seq.symbol_order()) names.push_back(seq.alphabet()->name(s));
        return IfsSequence::block_enumeration(seq.alphabet(), names, seq.start_offset() + n);
    }

    std::vector<int> pre = seq.preperiod();
    std::vector<int> per = seq.period();
    if (n <= pre.size()) {
        pre.erase(pre.begin(), pre.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
        const std::uint64_t rot = (n - pre.size()) % per.size();
        pre.clear();
        std::rotate(per.begin(), per.begin() + static_cast<std::ptrdiff_t>(rot), per.end());
    }
    return IfsSequence::eventually_periodic_ids(seq.alphabet(), std::move(pre), std::move(per));
}

namespace {

IfsSequence rebind(const IfsSequence& seq, AlphabetPtr alphabet) {
    if (seq.kind() == IfsSequence::Kind::BlockEnumeration) {
        std::vector<std::string> names;
        for (int s : seq.symbol_order()) names.push_back(alphabet->name(s));
        return IfsSequence::block_enumeration(std::move(alphabet), names, seq.start_offset());
    }
    return IfsSequence::eventually_periodic_ids(std::move(alphabet), seq.preperiod(),
                                                seq.period());
}

AlphabetPtr scaled_alphabet(const ContractionAlphabet& alphabet, double factor) {
    const SpaceBox& space = alphabet.space();
    std::vector<std::pair<std::string, AffineContraction>> entries;
    entries.reserve(alphabet.size());
    for (int i = 0; i < alphabet.size(); ++i) {
        const AffineContraction& f = alphabet.map(i);
        entries.emplace_back(alphabet.name(i),
                             validate_contraction(space,
                                                  scale_mat(f.matrix(), factor, space.dim()),
                                                  scale_vec(f.offset(), factor, space.dim())));
    }
    return std::make_shared<ContractionAlphabet>(space, std::move(entries));
}

std::uint64_t integral_time(double t) {
    if (!(t >= 0.0) || t != std::floor(t) || t > 0x1p53)
        throw IfsError(Errc::TimeOutsideDomain,
                       "discrete shift time must be a nonnegative integer");
    return static_cast<std::uint64_t>(t);
}

// Representation-level equality plus coefficient-wise max difference of the
// referenced maps. Exact zero difference means identical streams.
double stream_coefficient_diff(const IfsSequence& a, const IfsSequence& b) {
    if (a.kind() != b.kind() || a.preperiod() != b.preperiod() || a.period() != b.period() ||
        a.symbol_order() != b.symbol_order() || a.start_offset() != b.start_offset())
        return std::numeric_limits<double>::infinity();
    const auto& aa = *a.alphabet();
    const auto& ba = *b.alphabet();
    if (aa.size() != ba.size()) return std::numeric_limits<double>::infinity();
    const int n = aa.space().dim();
    double diff = 0.0;
    for (int s = 0; s < aa.size(); ++s) {
        const auto& f = aa.map(s);
        const auto& g = ba.map(s);
        for (int i = 0; i < n; ++i) {
            diff = std::max(diff, std::abs(f.offset()[i] - g.offset()[i]));
            for (int j = 0; j < n; ++j)
                diff = std::max(diff, std::abs(f.matrix()[i][j] - g.matrix()[i][j]));
        }
    }
    return diff;
}

}  // namespace

IfsSequence evolve(const EvolutionOperator& op, const IfsSequence& seq, double t) {
    if (op.kind == EvolutionOperator::Kind::ShiftDiscrete)
        return shift_n(seq, integral_time(t));

    if (!(t >= 0.0))
        throw IfsError(Errc::TimeOutsideDomain, "scaling time must be nonnegative");
    if (!seq.alphabet()->space().contains_origin())
        throw IfsError(Errc::OriginNotInSpace,
                       "exponential scaling requires the space to contain the origin");
    return rebind(seq, scaled_alphabet(*seq.alphabet(), std::exp(-t)));
}

GroupPropertyReport verify_group_property(const EvolutionOperator& op, const IfsSequence& seq,
                                          double t1, double t2, double tol) {
    GroupPropertyReport report;
    report.identity_ok = stream_coefficient_diff(evolve(op, seq, 0.0), seq) == 0.0;
    const IfsSequence joint = evolve(op, seq, t1 + t2);
    const IfsSequence staged = evolve(op, evolve(op, seq, t1), t2);
    report.max_coefficient_diff = stream_coefficient_diff(joint, staged);
    report.composition_ok = report.max_coefficient_diff <= tol;
    return report;
}

std::string PeriodicityReport::describe() const {
    switch (kind) {
        case Kind::Fixed: return "fixed";
        case Kind::Periodic: return "periodic(p=" + std::to_string(period) + ")";
        case Kind::EventuallyFixed: return "eventually-fixed(k=" + std::to_string(preperiod) + ")";
        case Kind::EventuallyPeriodic:
            return "eventually-periodic(k=" + std::to_string(preperiod) +
                   ",p=" + std::to_string(period) + ")";
        case Kind::AperiodicUpTo: return "aperiodic-up-to(" + std::to_string(horizon) + ")";
    }
    return "?";
}

namespace {

// Z-array: z[i] = length of the longest common prefix of s and s[i:].
std::vector<std::uint64_t> z_array(const std::vector<int>& s) {
    const std::uint64_t n = s.size();
    std::vector<std::uint64_t> z(n, 0);
    std::uint64_t l = 0, r = 0;
    for (std::uint64_t i = 1; i < n; ++i) {
        if (i < r) z[i] = std::min(r - i, z[i - l]);
        while (i + z[i] < n && s[z[i]] == s[i + z[i]]) ++z[i];
        if (i + z[i] > r) {
            l = i;
            r = i + z[i];
        }
    }
    return z;
}

}  // namespace

PeriodicityReport classify_periodicity(const IfsSequence& seq, std::uint64_t horizon) {
    if (horizon < 1) throw IfsError(Errc::InvalidArgument, "horizon must be at least 1");
    PeriodicityReport report;

    if (seq.kind() == IfsSequence::Kind::EventuallyPeriodic) {
        const IfsSequence canonical = normalize(seq).sequence;
        const std::uint64_t k = canonical.preperiod().size();
        const std::uint64_t p = canonical.period().size();
        report.preperiod = k;
        report.period = p;
        if (k == 0) {
            report.kind = p == 1 ? PeriodicityReport::Kind::Fixed
                                 : PeriodicityReport::Kind::Periodic;
            report.witness_shift = p;
        } else {
            report.kind = p == 1 ? PeriodicityReport::Kind::EventuallyFixed
                                 : PeriodicityReport::Kind::EventuallyPeriodic;
            report.witness_shift = k;
        }
        report.witness = shift_n(canonical, report.witness_shift).describe();
        return report;
    }

    // Generated stream: rule out every period up to the horizon on a prefix
    // of length 3*horizon, then report the honest semi-decision.
    const std::uint64_t window = 3 * horizon;
    const auto& alphabet = *seq.alphabet();
    std::vector<int> prefix(window);
    for (std::uint64_t k = 0; k < window; ++k)
        prefix[k] = alphabet.distinct_id(seq.symbol_at(k + 1));
    const std::vector<std::uint64_t> z = z_array(prefix);
    for (std::uint64_t q = 1; q <= horizon && q < window; ++q)
        if (z[q] == window - q)
            throw IfsError(Errc::InvalidArgument,
                           "generated stream matched period " + std::to_string(q) +
                               " across the whole window; representation bug");
    report.kind = PeriodicityReport::Kind::AperiodicUpTo;
    report.horizon = horizon;
    report.witness = "no period <= " + std::to_string(horizon) + " matches a prefix of length " +
                     std::to_string(window);
    return report;
}

IfsSequence periodic_truncation(const IfsSequence& seq, std::uint64_t n) {
    if (n < 1) throw IfsError(Errc::InvalidArgument, "truncation length must be at least 1");
    std::vector<int> period;
    period.reserve(n);
    for (std::uint64_t k = 1; k <= n; ++k) period.push_back(seq.symbol_at(k));
    return normalize(IfsSequence::eventually_periodic_ids(seq.alphabet(), {}, std::move(period)))
        .sequence;
}

ShiftIdentityReport shift_distance_identity(const IfsSequence& f, const IfsSequence& g,
                                            double tol, double tolerance) {
    ShiftIdentityReport report;
    report.distance = sequence_distance(f, g, tolerance);
    report.shifted = sequence_distance(shift(f), shift(g), tolerance);
    const auto& fa = *f.alphabet();
    const auto& ga = *g.alphabet();
    if (&fa == &ga) {
        report.first_term = fa.pair_bounded_distance(f.symbol_at(1), g.symbol_at(1));
    } else {
        report.first_term = bounded_distance(f.map_at(1), g.map_at(1), fa.space());
    }
    report.slack = 2.0 * report.distance.tail_bound + tol;
    report.identity_residual =
        std::abs(report.shifted.value - (2.0 * report.distance.value - report.first_term));
    report.identity_ok = report.identity_residual <= report.slack;
    report.doubling_bound_ok =
        report.shifted.value <= 2.0 * report.distance.value + report.slack;
    return report;
}

}  // namespace ifs
