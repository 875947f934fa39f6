#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dc1lab/errors.hpp"

namespace dc1lab::furstenberg {

// Finite shadow of a subset of N_0: the members below an explicit horizon.
class IndexSet {
public:
    explicit IndexSet(uint64_t horizon) : horizon_(horizon) {
        if (horizon == 0) throw precondition_error("index set horizon must be >= 1");
    }
    IndexSet(uint64_t horizon, std::vector<uint64_t> members) : IndexSet(horizon) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (!members.empty() && members.back() >= horizon)
            throw precondition_error("index set member beyond horizon");
        members_ = std::move(members);
    }

    uint64_t horizon() const { return horizon_; }
    const std::vector<uint64_t>& members() const { return members_; }
    size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }

    bool contains(uint64_t i) const {
        return std::binary_search(members_.begin(), members_.end(), i);
    }

    void insert(uint64_t i) {
        if (i >= horizon_) throw precondition_error("index set member beyond horizon");
        const auto it = std::lower_bound(members_.begin(), members_.end(), i);
        if (it == members_.end() || *it != i) members_.insert(it, i);
    }

    bool subset_of(const IndexSet& other) const {
        return std::includes(other.members_.begin(), other.members_.end(),
                             members_.begin(), members_.end());
    }

    IndexSet complement() const {
        IndexSet out(horizon_);
        out.members_.reserve(horizon_ - members_.size());
        size_t k = 0;
        for (uint64_t i = 0; i < horizon_; ++i) {
            if (k < members_.size() && members_[k] == i)
                ++k;
            else
                out.members_.push_back(i);
        }
        return out;
    }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
    uint64_t horizon_;
    std::vector<uint64_t> members_;
};

// Delta(A) = {k - j : j, k in A, j <= k}, same horizon. Requires 0 in A.
inline IndexSet difference_set(const IndexSet& a) {
    if (!a.contains(0))
        throw precondition_error("difference_set requires 0 to be a member");
    const uint64_t h = a.horizon();
    const auto& m = a.members();
    std::vector<uint64_t> hits;
    if (m.size() * m.size() <= 4 * h + 64) {
        std::vector<bool> seen(h, false);
        for (size_t j = 0; j < m.size(); ++j)
            for (size_t k = j; k < m.size(); ++k) seen[m[k] - m[j]] = true;
        for (uint64_t i = 0; i < h; ++i)
            if (seen[i]) hits.push_back(i);
    } else {
        // dense sets: word-parallel test of A & (A >> d) per difference d
        const size_t words = (h + 63) / 64;
        std::vector<uint64_t> bits(words + 1, 0);
        for (uint64_t i : m) bits[i / 64] |= uint64_t(1) << (i % 64);
        for (uint64_t d = 0; d < h; ++d) {
            const uint64_t q = d / 64, r = d % 64;
            bool found = false;
            for (size_t w = 0; w + q < words && !found; ++w) {
                uint64_t shifted = bits[w + q] >> r;
                if (r && w + q + 1 <= words) shifted |= bits[w + q + 1] << (64 - r);
                found = (bits[w] & shifted) != 0;
            }
            if (found) hits.push_back(d);
        }
    }
    return IndexSet(h, std::move(hits));
}

// Largest distance between consecutive members, counting a virtual member at
// -1 and one at the horizon. Empty sets have unbounded gap (nullopt).
inline std::optional<uint64_t> max_gap(const IndexSet& a) {
    if (a.empty()) return std::nullopt;
    const auto& m = a.members();
    uint64_t g = m.front() + 1;  // from -1 to the first member
    for (size_t i = 1; i < m.size(); ++i) g = std::max(g, m[i] - m[i - 1]);
    g = std::max(g, a.horizon() - m.back());
    return g;
}

// Longest block of consecutive integers contained in the set.
inline uint64_t max_run(const IndexSet& a) {
    const auto& m = a.members();
    uint64_t best = 0, cur = 0;
    for (size_t i = 0; i < m.size(); ++i) {
        cur = (i > 0 && m[i] == m[i - 1] + 1) ? cur + 1 : 1;
        best = std::max(best, cur);
    }
    return best;
}

enum class FamilyStatus { In, Out, Unknown };

inline const char* to_string(FamilyStatus s) {
    switch (s) {
        case FamilyStatus::In: return "IN";
        case FamilyStatus::Out: return "OUT";
        default: return "UNKNOWN";
    }
}

struct FamilyVerdict {
    FamilyStatus status = FamilyStatus::Unknown;
    std::optional<uint64_t> witness;
    std::string note;  // finite-horizon semantics of the verdict
};

// Families testable at finite horizon. Frr: contains all multiples of some k.
// Fs: syndetic (bounded gaps). Ft: thick (long runs).
struct Frr {
    std::optional<uint64_t> k;
};
struct Fs {
    std::optional<uint64_t> k;
};
struct Ft {
    std::optional<uint64_t> length;
};
using Family = std::variant<Frr, Fs, Ft>;

namespace detail {

inline uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = 0;
    for (int b = 31; b >= 0; --b) {
        const uint64_t c = r | (uint64_t(1) << b);
        if (c * c <= n) r = c;
    }
    return r;
}

inline std::optional<uint64_t> first_missing_multiple(const IndexSet& a, uint64_t k) {
    for (uint64_t i = 0; i < a.horizon(); i += k)
        if (!a.contains(i)) return i;
    return std::nullopt;
}

}  // namespace detail

inline FamilyVerdict family_test(const IndexSet& a, const Family& family) {
    FamilyVerdict v;
    if (const auto* frr = std::get_if<Frr>(&family)) {
        auto try_k = [&](uint64_t k) { return !detail::first_missing_multiple(a, k); };
        if (frr->k) {
            if (*frr->k == 0) throw precondition_error("Frr needs k >= 1");
            if (try_k(*frr->k)) {
                v.status = FamilyStatus::In;
                v.witness = *frr->k;
                v.note = "all multiples of k below the horizon are members";
            } else {
                v.status = FamilyStatus::Out;
                v.witness = *detail::first_missing_multiple(a, *frr->k);
                v.note = "witness is a missing multiple of k below the horizon";
            }
            return v;
        }
        for (uint64_t k = 1; k <= a.horizon() / 2; ++k) {
            if (try_k(k)) {
                v.status = FamilyStatus::In;
                v.witness = k;
                v.note = "all multiples of the witness below the horizon are members";
                return v;
            }
        }
        v.status = FamilyStatus::Out;
        v.witness = detail::first_missing_multiple(a, 1);
        v.note = "no k <= horizon/2 has all multiples below the horizon inside; "
                 "witness is the smallest non-member";
        return v;
    }
    if (const auto* fs = std::get_if<Fs>(&family)) {
        const auto gap = max_gap(a);
        // without an explicit bound, gaps up to floor(sqrt(horizon)) count as syndetic
        const uint64_t bound = fs->k ? *fs->k : detail::isqrt_u64(a.horizon());
        if (gap && *gap <= bound) {
            v.status = FamilyStatus::In;
            v.witness = *gap;
            v.note = "observed max gap (leading/trailing gaps included) within bound " +
                     std::to_string(bound);
        } else {
            v.status = FamilyStatus::Out;
            v.witness = gap;
            v.note = gap ? "observed max gap exceeds bound " + std::to_string(bound)
                         : "empty set: unbounded gap";
        }
        return v;
    }
    const auto& ft = std::get<Ft>(family);
    const uint64_t run = max_run(a);
    if (ft.length) {
        if (run >= *ft.length) {
            v.status = FamilyStatus::In;
            v.witness = run;
            v.note = "contains a run of the requested length; evidence only, "
                     "thickness is not decidable at finite horizon";
        } else {
            v.status = FamilyStatus::Out;
            v.witness = run;
            v.note = "no run of the requested length below the horizon";
        }
        return v;
    }
    if (run >= 1) {
        v.status = FamilyStatus::In;
        v.witness = run;
        v.note = "longest observed run; evidence only, thickness is not decidable "
                 "at finite horizon";
    } else {
        v.status = FamilyStatus::Out;
        v.witness = uint64_t{0};
        v.note = "empty set contains no runs";
    }
    return v;
}

// Finite-horizon check of the syndetic/thick duality under the declared gap
// convention: max_gap(complement) = max_run(A) + 1 (complement empty <=> the
// run reaches the horizon), and A meets every k-window iff max_gap(A) <= k.
struct DualityReport {
    uint64_t run = 0;
    std::optional<uint64_t> complement_gap;
    bool identity_pass = false;
    bool window_pass = false;
    std::optional<std::pair<uint64_t, uint64_t>> window_witness;  // (k, start)
    std::string convention =
        "gaps are distances between consecutive members with virtual members at "
        "-1 and the horizon; max_gap(complement) = max_run + 1 unless the "
        "complement is empty, in which case the run spans the horizon";
    bool pass() const { return identity_pass && window_pass; }
};

inline DualityReport duality_check(const IndexSet& a, uint64_t window_bound = 10) {
    DualityReport rep;
    rep.run = max_run(a);
    const IndexSet comp = a.complement();
    rep.complement_gap = max_gap(comp);
    rep.identity_pass = rep.complement_gap ? *rep.complement_gap == rep.run + 1
                                           : rep.run == a.horizon();
    rep.window_pass = true;
    const auto gap = max_gap(a);
    // next_member[i] = smallest member >= i, or horizon if none
    const uint64_t h = a.horizon();
    std::vector<uint64_t> next_member(h + 1, h);
    {
        std::vector<bool> in(h, false);
        for (uint64_t i : a.members()) in[i] = true;
        for (uint64_t i = h; i-- > 0;) next_member[i] = in[i] ? i : next_member[i + 1];
    }
    for (uint64_t k = 1; k <= window_bound && k <= h; ++k) {
        bool meets_all = true;
        uint64_t miss = 0;
        for (uint64_t start = 0; start + k <= h; ++start) {
            if (next_member[start] >= start + k) {  // window [start, start+k) misses A
                meets_all = false;
                miss = start;
                break;
            }
        }
        const bool syndetic_k = gap && *gap <= k;
        if (meets_all != syndetic_k) {
            rep.window_pass = false;
            rep.window_witness = {k, miss};
            break;
        }
    }
    return rep;
}

}  // namespace dc1lab::furstenberg
