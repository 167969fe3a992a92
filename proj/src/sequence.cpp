#include "ifs/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ifs {

namespace {

int resolve(const ContractionAlphabet& alphabet, const std::string& name) {
    if (auto idx = alphabet.find(name)) return *idx;
    throw IfsError(Errc::ValidationError, "unknown symbol name '" + name + "'");
}

bool alphabets_equivalent(const ContractionAlphabet& a, const ContractionAlphabet& b) {
    if (&a == &b) return true;
    if (a.space() != b.space() || a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a.name(i) != b.name(i)) return false;
        if (!a.map(i).same_coefficients(b.map(i))) return false;
    }
    return true;
}

std::string join_names(const ContractionAlphabet& alphabet, const std::vector<int>& symbols) {
    std::string out;
    for (size_t i = 0; i < symbols.size(); ++i) {
        if (i) out += ",";
        out += alphabet.name(symbols[i]);
    }
    return out;
}

}  // namespace

FiniteIfs::FiniteIfs(SpaceBox space,
                     std::vector<std::pair<std::string, AffineContraction>> maps)
    : space_(std::move(space)), maps_(std::move(maps)) {
    if (maps_.empty()) throw IfsError(Errc::EmptySystem, "finite IFS must be nonempty");
    for (size_t i = 0; i < maps_.size(); ++i) {
        if (maps_[i].second.space() != space_)
            throw IfsError(Errc::SpaceMismatch,
                           "map '" + maps_[i].first + "' validated on a different space");
        for (size_t j = 0; j < i; ++j)
            if (maps_[i].second.same_coefficients(maps_[j].second))
                throw IfsError(Errc::ValidationError, "maps '" + maps_[j].first + "' and '" +
                                                          maps_[i].first + "' are identical");
    }
}

std::vector<double> FiniteIfs::ratios() const {
    std::vector<double> out;
    out.reserve(maps_.size());
    for (const auto& [name, map] : maps_) out.push_back(map.ratio());
    return out;
}

bool FiniteIfs::uniform_similarity(double* ratio_out) const {
    const double r = maps_.front().second.ratio();
    for (const auto& [name, map] : maps_) {
        if (!map.is_similarity()) return false;
        if (map.ratio() != r) return false;
    }
    if (ratio_out) *ratio_out = r;
    return true;
}

IfsSequence IfsSequence::eventually_periodic(AlphabetPtr alphabet,
                                             const std::vector<std::string>& preperiod,
                                             const std::vector<std::string>& period) {
    std::vector<int> pre, per;
    for (const auto& name : preperiod) pre.push_back(resolve(*alphabet, name));
    for (const auto& name : period) per.push_back(resolve(*alphabet, name));
    return eventually_periodic_ids(std::move(alphabet), std::move(pre), std::move(per));
}

IfsSequence IfsSequence::eventually_periodic_ids(AlphabetPtr alphabet, std::vector<int> preperiod,
                                                 std::vector<int> period) {
    if (period.empty())
        throw IfsError(Errc::ValidationError, "period of a sequence must be nonempty");
    IfsSequence seq;
    seq.kind_ = Kind::EventuallyPeriodic;
    seq.alphabet_ = std::move(alphabet);
    seq.preperiod_ = std::move(preperiod);
    seq.period_ = std::move(period);
    return seq;
}

IfsSequence IfsSequence::block_enumeration(AlphabetPtr alphabet,
                                           const std::vector<std::string>& symbol_order,
                                           std::uint64_t start_offset) {
    if (symbol_order.size() < 2)
        throw IfsError(Errc::ValidationError,
                       "block enumeration needs at least two symbols");
    IfsSequence seq;
    seq.kind_ = Kind::BlockEnumeration;
    seq.alphabet_ = std::move(alphabet);
    for (const auto& name : symbol_order)
        seq.symbol_order_.push_back(resolve(*seq.alphabet_, name));
    // Pairwise distinct maps keep the stream genuinely aperiodic.
    for (size_t i = 0; i < seq.symbol_order_.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            if (seq.alphabet_->distinct_id(seq.symbol_order_[i]) ==
                seq.alphabet_->distinct_id(seq.symbol_order_[j]))
                throw IfsError(Errc::ValidationError,
                               "block enumeration symbols must be pairwise distinct maps");
    seq.start_offset_ = start_offset;
    return seq;
}

int IfsSequence::symbol_at(std::uint64_t k) const {
    if (k == 0) throw IfsError(Errc::InvalidArgument, "stream index is 1-based");
    if (kind_ == Kind::EventuallyPeriodic) {
        if (k <= preperiod_.size()) return preperiod_[k - 1];
        const std::uint64_t offset = k - preperiod_.size() - 1;
        return period_[offset % period_.size()];
    }

    // Block enumeration: the L-block section contributes L*m^L letters. Find
    // the section holding position k, then the block and the letter inside it.
    const unsigned __int128 pos = static_cast<unsigned __int128>(k) + start_offset_;
    const unsigned __int128 m = symbol_order_.size();
    unsigned __int128 consumed = 0;
    unsigned __int128 block_count = 1;
    std::uint64_t block_len = 0;
    for (;;) {
        ++block_len;
        block_count *= m;
        const unsigned __int128 section = block_count * block_len;
        if (pos <= consumed + section) break;
        consumed += section;
    }
    const unsigned __int128 in_section = pos - consumed - 1;  // 0-based
    unsigned __int128 block_index = in_section / block_len;
    const std::uint64_t letter = static_cast<std::uint64_t>(in_section % block_len);
    // Letter `letter` of the block is digit `letter` (most significant first)
    // of the block index written in base m.
    std::uint64_t digit = 0;
    for (std::uint64_t d = block_len; d-- > 0;) {
        digit = static_cast<std::uint64_t>(block_index % m);
        block_index /= m;
        if (d == letter) break;
    }
    return symbol_order_[digit];
}

const AffineContraction& IfsSequence::map_at(std::uint64_t k) const {
    return alphabet_->map(symbol_at(k));
}

const std::string& IfsSequence::name_at(std::uint64_t k) const {
    return alphabet_->name(symbol_at(k));
}

std::string IfsSequence::describe() const {
    if (kind_ == Kind::BlockEnumeration) {
        std::string out = "block-enumeration symbols=[" + join_names(*alphabet_, symbol_order_) +
                          "] offset=" + std::to_string(start_offset_);
        return out;
    }
    if (preperiod_.empty()) return "periodic period=[" + join_names(*alphabet_, period_) + "]";
    return "eventually-periodic preperiod=[" + join_names(*alphabet_, preperiod_) +
           "] period=[" + join_names(*alphabet_, period_) + "]";
}

NormalizeResult normalize(const IfsSequence& seq) {
    if (seq.kind() == IfsSequence::Kind::BlockEnumeration) return {seq, false};
    const auto& alphabet = *seq.alphabet();

    std::vector<int> pre, per;
    pre.reserve(seq.preperiod().size());
    per.reserve(seq.period().size());
    for (int s : seq.preperiod()) pre.push_back(alphabet.distinct_id(s));
    for (int s : seq.period()) per.push_back(alphabet.distinct_id(s));

    // Primitive root: shortest divisor-length prefix whose repetition is the period.
    const int p = static_cast<int>(per.size());
    for (int d = 1; d <= p; ++d) {
        if (p % d != 0) continue;
        bool repeats = true;
        for (int i = d; i < p && repeats; ++i) repeats = per[i] == per[i % d];
        if (repeats) {
            per.resize(d);
            break;
        }
    }

    // Absorb the preperiod tail: dropping a trailing symbol equal to the
    // period's last symbol and rotating the period right leaves the stream
    // unchanged.
    while (!pre.empty() && pre.back() == per.back()) {
        pre.pop_back();
        std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
    }

    return {IfsSequence::eventually_periodic_ids(seq.alphabet(), std::move(pre), std::move(per)),
            true};
}

CompareResult sequences_equal(const IfsSequence& f, const IfsSequence& g,
                              std::uint64_t horizon) {
    if (!alphabets_equivalent(*f.alphabet(), *g.alphabet()))
        throw IfsError(Errc::AlphabetMismatch, "sequences use different alphabets");
    const auto& alphabet = *f.alphabet();

    const auto mismatch_upto = [&](std::uint64_t limit) -> CompareResult {
        for (std::uint64_t k = 1; k <= limit; ++k) {
            if (alphabet.distinct_id(f.symbol_at(k)) != alphabet.distinct_id(g.symbol_at(k)))
                return {SeqCompare::NotEqual, k};
        }
        return {SeqCompare::UnknownUpTo, limit};
    };

    if (f.kind() == IfsSequence::Kind::EventuallyPeriodic &&
        g.kind() == IfsSequence::Kind::EventuallyPeriodic) {
        const IfsSequence cf = normalize(f).sequence;
        const IfsSequence cg = normalize(g).sequence;
        if (cf.preperiod() == cg.preperiod() && cf.period() == cg.period())
            return {SeqCompare::Equal, 0};
        // Canonical forms differ, so the streams must differ within one
        // combined preperiod plus one common period cycle.
        const std::uint64_t pre = std::max(cf.preperiod().size(), cg.preperiod().size());
        const std::uint64_t cycle = std::lcm(cf.period().size(), cg.period().size());
        const CompareResult r = mismatch_upto(pre + cycle);
        if (r.outcome != SeqCompare::NotEqual)
            throw IfsError(Errc::InvalidArgument,
                           "canonical forms differ but streams agree; normalization bug");
        return r;
    }

    return mismatch_upto(horizon);
}

IfsSequence embed_finite(const FiniteIfs& system) {
    auto alphabet = std::make_shared<ContractionAlphabet>(system.space(), system.entries());
    std::vector<int> pre(system.size());
    std::iota(pre.begin(), pre.end(), 0);
    return normalize(IfsSequence::eventually_periodic_ids(std::move(alphabet), std::move(pre),
                                                          {0}))
        .sequence;
}

IfsSequence embed_finite(const AlphabetPtr& alphabet, const std::vector<std::string>& names) {
    if (names.empty()) throw IfsError(Errc::EmptySystem, "cannot embed an empty system");
    std::vector<std::pair<std::string, AffineContraction>> entries;
    std::vector<int> pre;
    for (const auto& name : names) {
        const int idx = resolve(*alphabet, name);
        entries.emplace_back(alphabet->name(idx), alphabet->map(idx));
        pre.push_back(idx);
    }
    FiniteIfs check(alphabet->space(), std::move(entries));  // enforces distinctness
    return normalize(IfsSequence::eventually_periodic_ids(alphabet, std::move(pre), {pre.empty() ? 0 : pre.front()}))
        .sequence;
}

DistanceReport sequence_distance(const IfsSequence& f, const IfsSequence& g, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0))
        throw IfsError(Errc::InvalidArgument, "tolerance must lie in (0,1)");
    const auto& fa = *f.alphabet();
    const auto& ga = *g.alphabet();
    if (fa.space() != ga.space())
        throw IfsError(Errc::SpaceMismatch, "sequences live on different spaces");

    const int depth = static_cast<int>(std::ceil(-std::log2(tolerance)));
    const bool shared = &fa == &ga;
    // Cross-alphabet pairs (e.g. a sequence against its scaled evolution) get
    // a local memo; same-alphabet pairs use the precomputed table.
    std::vector<double> memo;
    if (!shared) memo.assign(static_cast<size_t>(fa.size()) * ga.size(), -1.0);

    double value = 0.0;
    for (int k = 1; k <= depth; ++k) {
        const int i = f.symbol_at(k);
        const int j = g.symbol_at(k);
        double d;
        if (shared) {
            d = fa.pair_bounded_distance(i, j);
        } else {
            double& slot = memo[static_cast<size_t>(i) * ga.size() + j];
            if (slot < 0.0) slot = bounded_distance(fa.map(i), ga.map(j), fa.space());
            d = slot;
        }
        value += std::ldexp(d, -k);
    }
    return DistanceReport{value, depth, std::ldexp(1.0, -depth)};
}

FiniteIfs distinct_system(const IfsSequence& seq) {
    const auto& alphabet = *seq.alphabet();
    std::vector<int> reps;  // distinct class representatives, first-appearance order
    const auto consider = [&](int symbol) {
        const int rep = alphabet.distinct_id(symbol);
        if (std::find(reps.begin(), reps.end(), rep) == reps.end()) reps.push_back(rep);
    };

    if (seq.kind() == IfsSequence::Kind::EventuallyPeriodic) {
        for (int s : seq.preperiod()) consider(s);
        for (int s : seq.period()) consider(s);
    } else {
        const size_t want = seq.symbol_order().size();
        // Every symbol shows up within a few blocks of any start offset; the
        // cap is a safety net, not a tuning knob.
        for (std::uint64_t k = 1; reps.size() < want && k <= 1000000; ++k)
            consider(seq.symbol_at(k));
        if (reps.size() < want)
            throw IfsError(Errc::InvalidArgument,
                           "block enumeration scan did not reach every symbol");
    }

    std::vector<std::pair<std::string, AffineContraction>> maps;
    maps.reserve(reps.size());
    for (int rep : reps) maps.emplace_back(alphabet.name(rep), alphabet.map(rep));
    return FiniteIfs(alphabet.space(), std::move(maps));
}

}  // namespace ifs
