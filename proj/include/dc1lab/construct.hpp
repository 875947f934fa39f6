#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "dc1lab/orbitstats.hpp"
#include "dc1lab/sequence.hpp"
#include "dc1lab/system.hpp"

namespace dc1lab::construct {

using systems::BlockTracks;
using systems::PrefixPeriodic;
using systems::Symbol;
using systems::SymbolicSequence;

// Alternating proximal/distal phase lengths L_1 = initial_length and
// L_k = accel * k * S_{k-1} for k >= 2, S_k = L_1 + ... + L_k. Phase-end
// densities L_k / S_k = accel*k / (accel*k + 1) approach 1, which is what
// the two scrambling density conditions need along their subsequences.
// classic() is the minimal-growth variant (accel = 1, L_1 = 1).
struct BlockSchedule {
    uint64_t initial_length = 10;
    uint64_t accel = 100;

    BlockSchedule() = default;
    BlockSchedule(uint64_t initial_length, uint64_t accel)
        : initial_length(initial_length), accel(accel) {
        if (initial_length == 0 || accel == 0)
            throw precondition_error("block schedule needs positive parameters");
    }
    static BlockSchedule classic() { return BlockSchedule(1, 1); }

    friend bool operator==(const BlockSchedule&, const BlockSchedule&) = default;

    // S_1, ..., S_count as exact integers
    std::vector<Integer> phase_ends_exact(size_t count) const {
        std::vector<Integer> ends;
        Integer s(static_cast<unsigned long>(initial_length));
        ends.push_back(s);
        for (size_t k = 2; k <= count; ++k) {
            const Integer l = Integer(static_cast<unsigned long>(accel)) *
                              static_cast<unsigned long>(k) * s;
            s += l;
            ends.push_back(s);
        }
        return ends;
    }

    // phase ends that fit below the index cap (enough for any reachable index)
    std::vector<uint64_t> phase_ends() const {
        std::vector<uint64_t> ends;
        Integer s(static_cast<unsigned long>(initial_length));
        const Integer cap(static_cast<unsigned long>(systems::kIndexCap));
        size_t k = 2;
        while (s <= cap) {
            ends.push_back(to_u64(s));
            const Integer l = Integer(static_cast<unsigned long>(accel)) *
                              static_cast<unsigned long>(k) * s;
            s += l;
            ++k;
        }
        return ends;
    }

    // L_k and S_k for small k, exact
    Integer phase_length(size_t k) const {
        const auto ends = phase_ends_exact(k);
        return k == 1 ? ends[0] : ends[k - 1] - ends[k - 2];
    }
};

// Explicit scrambled-tuple description: n block-program sequences that copy
// a common proximal target on odd phases and per-coordinate distal anchors on
// even phases, all time-aligned.
struct ScrambledTupleSpec {
    size_t n = 2;
    uint32_t alphabet_size = 3;
    BlockSchedule schedule;
    std::vector<PrefixPeriodic> distal_anchors;  // one per coordinate
    PrefixPeriodic proximal_target;

    std::vector<SymbolicSequence> sequences() const {
        std::vector<SymbolicSequence> out;
        const auto ends = schedule.phase_ends();
        for (size_t j = 0; j < n; ++j) {
            BlockTracks bt;
            bt.phase_ends = ends;
            bt.proximal = proximal_target;
            bt.distal = distal_anchors[j];
            out.emplace_back(alphabet_size, std::move(bt));
        }
        return out;
    }

    friend bool operator==(const ScrambledTupleSpec&, const ScrambledTupleSpec&) = default;
};

// Constant-anchor construction: distal anchors are n distinct fixed points,
// the proximal target is the fixed point of symbol 0. With the default
// alphabet n+1 the distal symbols are 1..n; alphabet n reuses symbol 0.
inline ScrambledTupleSpec make_dc1_tuple_spec(size_t n, const BlockSchedule& schedule,
                                              uint32_t alphabet_size) {
    if (n < 2) throw precondition_error("scrambled tuples need n >= 2");
    if (alphabet_size < n)
        throw precondition_error("alphabet too small: distal anchors need n distinct symbols");
    ScrambledTupleSpec spec;
    spec.n = n;
    spec.alphabet_size = alphabet_size;
    spec.schedule = schedule;
    spec.proximal_target = PrefixPeriodic::constant(0);
    const Symbol base = alphabet_size > n ? 1 : 0;
    for (size_t j = 0; j < n; ++j)
        spec.distal_anchors.push_back(PrefixPeriodic::constant(base + static_cast<Symbol>(j)));
    return spec;
}

inline std::vector<SymbolicSequence> build_dc1_tuple(size_t n,
                                                     const BlockSchedule& schedule = {},
                                                     uint32_t alphabet_size = 0) {
    if (alphabet_size == 0) alphabet_size = static_cast<uint32_t>(n) + 1;
    return make_dc1_tuple_spec(n, schedule, alphabet_size).sequences();
}

// General anchors: coordinate j tracks anchor a_j through distal phases and
// the common target through proximal phases (symbols taken at the absolute
// index, so the tuple genuinely follows the anchors' orbits). The anchors
// must form a certified distal set.
inline ScrambledTupleSpec tuple_from_stable_targets(
    const std::vector<SymbolicSequence>& anchors, const SymbolicSequence& target,
    const BlockSchedule& schedule = {}) {
    if (anchors.size() < 2) throw precondition_error("need n >= 2 anchors");
    const uint32_t alphabet = target.alphabet_size();
    for (const auto& a : anchors) {
        if (a.alphabet_size() != alphabet)
            throw precondition_error("anchors and target must share one alphabet");
        if (!a.is_prefix_periodic())
            throw precondition_error("anchors must be prefix-periodic");
    }
    if (!target.is_prefix_periodic())
        throw precondition_error("the proximal target must be prefix-periodic");

    const systems::SystemSpec shift = systems::make_full_shift(alphabet);
    std::vector<systems::Point> pts;
    for (const auto& a : anchors) pts.push_back(systems::make_shift_point(a));
    const auto distal = orbitstats::distal_tuple_check(shift, pts, systems::kComparisonBound);
    if (!distal.certified || distal.min_separation.sign() <= 0)
        throw precondition_error("anchors are not a certified distal set");

    ScrambledTupleSpec spec;
    spec.n = anchors.size();
    spec.alphabet_size = alphabet;
    spec.schedule = schedule;
    spec.proximal_target = target.prefix_periodic();
    for (const auto& a : anchors) spec.distal_anchors.push_back(a.prefix_periodic());
    return spec;
}

}  // namespace dc1lab::construct
