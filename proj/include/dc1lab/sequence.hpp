#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dc1lab/errors.hpp"

namespace dc1lab::systems {

using Symbol = uint32_t;
using Word = std::vector<Symbol>;

// Index horizon beyond which block programs are never sampled in practice.
inline constexpr uint64_t kIndexCap = uint64_t(1) << 62;

// Eventually periodic one-sided sequence: prefix then period repeated forever.
struct PrefixPeriodic {
    Word prefix;
    Word period;  // nonempty

    PrefixPeriodic() : period{0} {}
    PrefixPeriodic(Word prefix, Word period)
        : prefix(std::move(prefix)), period(std::move(period)) {
        if (this->period.empty()) throw precondition_error("empty period");
    }
    static PrefixPeriodic constant(Symbol s) { return PrefixPeriodic({}, {s}); }

    Symbol at(uint64_t i) const {
        if (i < prefix.size()) return prefix[i];
        return period[(i - prefix.size()) % period.size()];
    }

    // The sequence shifted left by k (drop the first k symbols).
    PrefixPeriodic drop(uint64_t k) const {
        if (k <= prefix.size()) {
            return PrefixPeriodic(Word(prefix.begin() + static_cast<long>(k), prefix.end()),
                                  period);
        }
        const uint64_t r = (k - prefix.size()) % period.size();
        Word rolled(period.begin() + static_cast<long>(r), period.end());
        rolled.insert(rolled.end(), period.begin(), period.begin() + static_cast<long>(r));
        return PrefixPeriodic({}, rolled);
    }

    friend bool operator==(const PrefixPeriodic&, const PrefixPeriodic&) = default;
};

// Exact equality of the generated sequences (not of the descriptions):
// eventually periodic sequences agree everywhere iff they agree through
// max prefix length + lcm of periods.
inline bool same_sequence(const PrefixPeriodic& x, const PrefixPeriodic& y) {
    const uint64_t px = x.prefix.size(), py = y.prefix.size();
    const uint64_t l = std::lcm<uint64_t>(x.period.size(), y.period.size());
    if (l > (uint64_t(1) << 22)) throw budget_error("period lcm too large to compare");
    const uint64_t bound = std::max(px, py) + l;
    for (uint64_t i = 0; i < bound; ++i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

// Alternating block program: phase k (1-based) covers [S_{k-1}, S_k); odd
// phases copy the proximal track, even phases the distal track, both sampled
// at the absolute index (time-aligned tracking). Beyond the last stored
// boundary the program stays in the next phase forever; boundaries are
// generated out past kIndexCap, so that regime is unreachable.
struct BlockTracks {
    std::vector<uint64_t> phase_ends;  // S_1 < S_2 < ... (strictly increasing)
    PrefixPeriodic proximal;
    PrefixPeriodic distal;

    // 1-based phase index containing i.
    uint64_t phase_of(uint64_t i) const {
        const auto it = std::upper_bound(phase_ends.begin(), phase_ends.end(), i);
        return static_cast<uint64_t>(it - phase_ends.begin()) + 1;
    }
    bool distal_at(uint64_t i) const { return phase_of(i) % 2 == 0; }
    Symbol at(uint64_t i) const { return distal_at(i) ? distal.at(i) : proximal.at(i); }

    friend bool operator==(const BlockTracks&, const BlockTracks&) = default;
};

// A finitely described point of a shift space. Value type; cheap to copy.
class SymbolicSequence {
public:
    SymbolicSequence() : alphabet_(2), gen_(PrefixPeriodic::constant(0)) {}
    SymbolicSequence(uint32_t alphabet_size, PrefixPeriodic g)
        : alphabet_(alphabet_size), gen_(std::move(g)) {
        if (alphabet_size < 2) throw precondition_error("alphabet size must be >= 2");
        check_symbols();
    }
    SymbolicSequence(uint32_t alphabet_size, BlockTracks g)
        : alphabet_(alphabet_size),
          gen_(std::make_shared<const BlockTracks>(std::move(g))) {
        if (alphabet_size < 2) throw precondition_error("alphabet size must be >= 2");
        check_symbols();
    }

    static SymbolicSequence constant(uint32_t alphabet_size, Symbol s) {
        return SymbolicSequence(alphabet_size, PrefixPeriodic::constant(s));
    }

    uint32_t alphabet_size() const { return alphabet_; }

    Symbol at(uint64_t i) const {
        if (const auto* pp = std::get_if<PrefixPeriodic>(&gen_)) return pp->at(i);
        return std::get<std::shared_ptr<const BlockTracks>>(gen_)->at(i);
    }

    bool is_prefix_periodic() const {
        return std::holds_alternative<PrefixPeriodic>(gen_);
    }
    const PrefixPeriodic& prefix_periodic() const {
        if (!is_prefix_periodic())
            throw precondition_error("sequence is not prefix-periodic");
        return std::get<PrefixPeriodic>(gen_);
    }
    bool is_block_program() const { return !is_prefix_periodic(); }
    const BlockTracks& block_program() const {
        if (is_prefix_periodic())
            throw precondition_error("sequence is not a block program");
        return *std::get<std::shared_ptr<const BlockTracks>>(gen_);
    }

    // Structural equality of generators (prefix-periodic generators compare
    // by generated sequence so that e.g. "1-periodic 00" equals "0-constant").
    friend bool operator==(const SymbolicSequence& x, const SymbolicSequence& y) {
        if (x.alphabet_ != y.alphabet_) return false;
        if (x.is_prefix_periodic() != y.is_prefix_periodic()) return false;
        if (x.is_prefix_periodic())
            return same_sequence(x.prefix_periodic(), y.prefix_periodic());
        return x.block_program() == y.block_program();
    }
    friend bool operator!=(const SymbolicSequence& x, const SymbolicSequence& y) {
        return !(x == y);
    }

private:
    void check_symbols() const {
        auto check_word = [&](const Word& w) {
            for (Symbol s : w)
                if (s >= alphabet_)
                    throw precondition_error("symbol " + std::to_string(s) +
                                             " outside alphabet of size " +
                                             std::to_string(alphabet_));
        };
        if (const auto* pp = std::get_if<PrefixPeriodic>(&gen_)) {
            check_word(pp->prefix);
            check_word(pp->period);
        } else {
            const auto& bt = *std::get<std::shared_ptr<const BlockTracks>>(gen_);
            check_word(bt.proximal.prefix);
            check_word(bt.proximal.period);
            check_word(bt.distal.prefix);
            check_word(bt.distal.period);
            if (!std::is_sorted(bt.phase_ends.begin(), bt.phase_ends.end()) ||
                std::adjacent_find(bt.phase_ends.begin(), bt.phase_ends.end()) !=
                    bt.phase_ends.end())
                throw precondition_error("block phase ends must be strictly increasing");
        }
    }

    uint32_t alphabet_;
    std::variant<PrefixPeriodic, std::shared_ptr<const BlockTracks>> gen_;
};

// First index k < bound with x[ox+k] != y[oy+k], if any.
inline std::optional<uint64_t> first_disagreement(const SymbolicSequence& x, uint64_t ox,
                                                  const SymbolicSequence& y, uint64_t oy,
                                                  uint64_t bound) {
    for (uint64_t k = 0; k < bound; ++k)
        if (x.at(ox + k) != y.at(oy + k)) return k;
    return std::nullopt;
}

}  // namespace dc1lab::systems
