#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ifs/contraction.hpp"

namespace ifs {

// Finite IFS: named, pairwise-distinct contractions on one space, kept in
// order of first appearance.
class FiniteIfs {
public:
    FiniteIfs(SpaceBox space, std::vector<std::pair<std::string, AffineContraction>> maps);

    const SpaceBox& space() const { return space_; }
    int size() const { return static_cast<int>(maps_.size()); }
    const std::string& name(int index) const { return maps_[index].first; }
    const AffineContraction& map(int index) const { return maps_[index].second; }
    const std::vector<std::pair<std::string, AffineContraction>>& entries() const {
        return maps_;
    }

    std::vector<double> ratios() const;
    // All maps are similarities sharing one ratio (exact coefficient check).
    bool uniform_similarity(double* ratio_out = nullptr) const;

private:
    SpaceBox space_;
    std::vector<std::pair<std::string, AffineContraction>> maps_;
};

// One element of the sequence space: an infinite stream of contractions over
// a named alphabet. Two representations cover everything the library
// constructs: eventually periodic streams, and the block-enumeration stream
// that concatenates all 1-blocks, 2-blocks, ... over a symbol set in
// lexicographic order. A shift of a generated stream is recorded as a start
// offset.
class IfsSequence {
public:
    enum class Kind { EventuallyPeriodic, BlockEnumeration };

    static IfsSequence eventually_periodic(AlphabetPtr alphabet,
                                           const std::vector<std::string>& preperiod,
                                           const std::vector<std::string>& period);
    static IfsSequence eventually_periodic_ids(AlphabetPtr alphabet, std::vector<int> preperiod,
                                               std::vector<int> period);
    static IfsSequence block_enumeration(AlphabetPtr alphabet,
                                         const std::vector<std::string>& symbol_order,
                                         std::uint64_t start_offset = 0);

    Kind kind() const { return kind_; }
    const AlphabetPtr& alphabet() const { return alphabet_; }

    // 1-based stream accessor; returns an alphabet index.
    int symbol_at(std::uint64_t k) const;
    const AffineContraction& map_at(std::uint64_t k) const;
    const std::string& name_at(std::uint64_t k) const;

    const std::vector<int>& preperiod() const { return preperiod_; }
    const std::vector<int>& period() const { return period_; }
    const std::vector<int>& symbol_order() const { return symbol_order_; }
    std::uint64_t start_offset() const { return start_offset_; }

    std::string describe() const;

private:
    IfsSequence() = default;

    Kind kind_ = Kind::EventuallyPeriodic;
    AlphabetPtr alphabet_;
    std::vector<int> preperiod_;     // eventually periodic only
    std::vector<int> period_;        // eventually periodic only, nonempty
    std::vector<int> symbol_order_;  // block enumeration only, >= 2 symbols
    std::uint64_t start_offset_ = 0; // block enumeration only
};

struct NormalizeResult {
    IfsSequence sequence;
    // False when the input is generator-backed and has no finite canonical form.
    bool normalized = false;
};

// Unique canonical form of an eventually periodic stream: primitive period,
// preperiod shortened while its last symbol matches the period's last symbol
// (rotating the period to keep the stream identical). Symbols are replaced by
// their coefficient-class representative so equal streams of maps normalize
// identically. Idempotent. Generated streams come back unchanged with
// normalized = false.
NormalizeResult normalize(const IfsSequence& seq);

enum class SeqCompare { Equal, NotEqual, UnknownUpTo };

struct CompareResult {
    SeqCompare outcome;
    // First index where the streams differ (NotEqual), or the horizon that
    // was exhausted (UnknownUpTo).
    std::uint64_t index = 0;
};

CompareResult sequences_equal(const IfsSequence& f, const IfsSequence& g,
                              std::uint64_t horizon = 10000);

// The stream (f_1,...,f_n,f_1,f_1,...) identified with a finite IFS, in
// canonical form.
IfsSequence embed_finite(const FiniteIfs& system);
IfsSequence embed_finite(const AlphabetPtr& alphabet, const std::vector<std::string>& names);

struct DistanceReport {
    double value = 0.0;
    int truncation_depth = 0;
    double tail_bound = 0.0;  // exactly 2^-K
};

// Product metric D(F,G) = sum_k bounded_distance(f_k,g_k) / 2^k, truncated at
// K = ceil(log2(1/tolerance)) terms so the true value lies in
// [value, value + tail_bound).
DistanceReport sequence_distance(const IfsSequence& f, const IfsSequence& g,
                                 double tolerance = 0x1p-40);

// The distinct contractions appearing in the stream, in first-appearance
// order.
FiniteIfs distinct_system(const IfsSequence& seq);

}  // namespace ifs
