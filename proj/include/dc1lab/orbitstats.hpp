#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dc1lab/minimality.hpp"
#include "dc1lab/system.hpp"

namespace dc1lab::orbitstats {

using systems::OpenSetSpec;
using systems::Point;
using systems::QuadraticNumber;
using systems::ShiftPoint;
using systems::SystemSpec;

// Geometric checkpoint grid: the finite stand-in for m -> infinity. The
// last checkpoint is always m_max.
struct CheckpointSchedule {
    uint64_t m_min = 1000;
    uint64_t m_max = 100000;
    Rational growth = Rational(11, 10);

    CheckpointSchedule() = default;
    CheckpointSchedule(uint64_t m_min, uint64_t m_max, Rational growth)
        : m_min(m_min), m_max(m_max), growth(std::move(growth)) {
        if (m_min < 1 || m_min > m_max)
            throw precondition_error("checkpoint schedule needs 1 <= m_min <= m_max");
        if (!(this->growth > 1))
            throw precondition_error("checkpoint growth must exceed 1");
    }

    std::vector<uint64_t> checkpoints() const {
        std::vector<uint64_t> cps;
        Rational v(static_cast<unsigned long>(m_min));
        uint64_t last = 0;
        while (true) {
            const uint64_t c = to_u64(round_rational(v));
            if (c >= m_max) break;
            if (c > last) {
                cps.push_back(c);
                last = c;
            }
            v *= growth;
        }
        cps.push_back(m_max);
        return cps;
    }
};

struct DensityProfile {
    std::vector<uint64_t> checkpoints;
    std::vector<Rational> densities;  // exact |{i < m : pred}| / m
    Rational limsup_estimate = 0;
    Rational liminf_estimate = 0;

    void finalize() {
        if (densities.empty()) return;
        limsup_estimate = densities[0];
        liminf_estimate = densities[0];
        for (const auto& d : densities) {
            if (d > limsup_estimate) limsup_estimate = d;
            if (d < liminf_estimate) liminf_estimate = d;
        }
    }
};

// Exact partial densities of an indicator along the checkpoint grid.
template <class Indicator>
DensityProfile density_profile(Indicator&& indicator, const CheckpointSchedule& schedule) {
    DensityProfile prof;
    prof.checkpoints = schedule.checkpoints();
    prof.densities.reserve(prof.checkpoints.size());
    uint64_t count = 0;
    size_t next = 0;
    for (uint64_t i = 0; i < schedule.m_max && next < prof.checkpoints.size(); ++i) {
        if (indicator(i)) ++count;
        while (next < prof.checkpoints.size() && i + 1 == prof.checkpoints[next]) {
            Rational d{Integer(count), Integer(prof.checkpoints[next])};
            d.canonicalize();
            prof.densities.push_back(d);
            ++next;
        }
    }
    prof.finalize();
    return prof;
}

struct TupleVerdict {
    size_t n = 0;
    QuadraticNumber delta;
    std::vector<QuadraticNumber> eps_grid;
    DensityProfile a_profile;                // min pairwise distance > delta
    std::vector<DensityProfile> b_profiles;  // max pairwise distance < eps, per eps
    Rational tol = Rational(1, 100);
    bool dc1_evidence = false;

    bool recompute_evidence() const {
        const Rational bar = 1 - tol;
        if (a_profile.limsup_estimate < bar) return false;
        for (const auto& b : b_profiles)
            if (b.limsup_estimate < bar) return false;
        return true;
    }
};

inline constexpr uint64_t kPairStepBudget = 60'000'000;

namespace detail {

// smallest K with 2^-K <= delta (<= relation), or none if delta >= 1... the
// A side needs the largest k with 2^-k > delta instead, so both are derived
// from the strict/non-strict thresholds below.
inline std::optional<uint64_t> largest_k_with_pow2_above(const QuadraticNumber& delta,
                                                         uint64_t cap) {
    // largest k >= 0 with 2^-k > delta; none if 1 <= delta
    if ((QuadraticNumber(Rational(1)) - delta).sign() <= 0) return std::nullopt;
    for (uint64_t k = 0; k <= cap; ++k) {
        const QuadraticNumber p(pow2(-static_cast<long>(k + 1)));
        if ((p - delta).sign() <= 0) return k;
    }
    throw budget_error("delta too small for the shift comparison bound");
}

inline uint64_t smallest_k_with_pow2_below(const QuadraticNumber& eps, uint64_t cap) {
    // smallest k >= 0 with 2^-k < eps (strict)
    for (uint64_t k = 0; k <= cap; ++k) {
        const QuadraticNumber p(pow2(-static_cast<long>(k)));
        if ((p - eps).sign() < 0) return k;
    }
    throw budget_error("eps too small for the shift comparison bound");
}

}  // namespace detail

// Lockstep orbit statistics for an n-tuple: per index i the minimum and
// maximum pairwise distances feed the two density conditions. All-shift
// tuples use capped first-disagreement scans (the thresholds only need a
// bounded window); other systems take exact distances.
inline TupleVerdict dc1_tuple_statistics(const SystemSpec& spec,
                                         const std::vector<Point>& tuple,
                                         const QuadraticNumber& delta,
                                         const std::vector<QuadraticNumber>& eps_grid,
                                         const CheckpointSchedule& schedule,
                                         Rational tol = Rational(1, 100),
                                         uint64_t pair_step_budget = kPairStepBudget) {
    const size_t n = tuple.size();
    if (n < 2) throw precondition_error("tuple statistics need n >= 2 points");
    if (delta.sign() <= 0) throw precondition_error("delta must be positive");
    if (eps_grid.empty()) throw precondition_error("empty eps grid");
    for (size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i + 1] < eps_grid[i]))
            throw precondition_error("eps grid must be strictly decreasing");
    for (const auto& e : eps_grid)
        if (e.sign() <= 0) throw precondition_error("eps values must be positive");
    for (const auto& p : tuple) systems::check_belongs(spec, p);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (systems::point_equal(tuple[i], tuple[j]))
                throw precondition_error("tuple points must be pairwise distinct");

    const uint64_t pairs = n * (n - 1) / 2;
    if (pairs * schedule.m_max > pair_step_budget)
        throw budget_error("tuple statistics over budget; use a smaller schedule");

    TupleVerdict verdict;
    verdict.n = n;
    verdict.delta = delta;
    verdict.eps_grid = eps_grid;
    verdict.tol = std::move(tol);

    const auto cps = schedule.checkpoints();
    verdict.a_profile.checkpoints = cps;
    verdict.b_profiles.assign(eps_grid.size(), DensityProfile{});
    for (auto& b : verdict.b_profiles) b.checkpoints = cps;

    uint64_t count_a = 0;
    std::vector<uint64_t> count_b(eps_grid.size(), 0);
    size_t next_cp = 0;

    auto record = [&](uint64_t i, bool a_holds, const std::vector<bool>& b_holds) {
        // runtime invariants: for eps <= delta the two indicator sets are
        // disjoint; B is monotone along the decreasing grid
        for (size_t e = 0; e < eps_grid.size(); ++e) {
            if (b_holds[e] && a_holds && (eps_grid[e] - delta).sign() <= 0)
                throw std::logic_error("A and B indicators overlap at one index");
            if (e > 0 && b_holds[e] && !b_holds[e - 1])
                throw std::logic_error("B indicators not monotone across the eps grid");
        }
        if (a_holds) ++count_a;
        for (size_t e = 0; e < eps_grid.size(); ++e)
            if (b_holds[e]) ++count_b[e];
        while (next_cp < cps.size() && i + 1 == cps[next_cp]) {
            Rational da{Integer(count_a), Integer(cps[next_cp])};
            da.canonicalize();
            verdict.a_profile.densities.push_back(da);
            for (size_t e = 0; e < eps_grid.size(); ++e) {
                Rational db{Integer(count_b[e]), Integer(cps[next_cp])};
                db.canonicalize();
                verdict.b_profiles[e].densities.push_back(db);
            }
            ++next_cp;
        }
    };

    const auto& sv = spec.kind().v;
    const bool shift_space =
        std::holds_alternative<systems::FullShift>(sv) || std::holds_alternative<systems::Sft>(sv);
    if (shift_space) {
        std::vector<const ShiftPoint*> pts;
        pts.reserve(n);
        for (const auto& p : tuple) pts.push_back(&std::get<ShiftPoint>(p.kind().v));
        const auto a_bits =
            detail::largest_k_with_pow2_above(delta, systems::kComparisonBound);
        std::vector<uint64_t> b_bits;
        uint64_t window = a_bits ? *a_bits + 1 : 0;
        for (const auto& e : eps_grid) {
            b_bits.push_back(detail::smallest_k_with_pow2_below(e, systems::kComparisonBound));
            window = std::max(window, b_bits.back() + 1);
        }
        std::vector<bool> b_holds(eps_grid.size());
        for (uint64_t i = 0; i < schedule.m_max; ++i) {
            // min over pairs of the first-disagreement index decides A; the
            // max decides nothing -- B needs the smallest disagreement too:
            // max pairwise distance < eps  <=>  every pair agrees past the
            // eps window, so both conditions reduce to the smallest k.
            uint64_t min_k = window;  // "window" means no disagreement within it
            for (size_t a = 0; a < n && min_k > 0; ++a) {
                for (size_t b = a + 1; b < n && min_k > 0; ++b) {
                    const auto k = systems::first_disagreement(
                        pts[a]->seq, pts[a]->offset + i, pts[b]->seq, pts[b]->offset + i,
                        min_k);
                    if (k) min_k = std::min(min_k, *k);
                }
            }
            // A: min pairwise distance > delta <=> ALL pairs disagree within
            // the delta window; that is max_k <= a_bits, not min_k.
            // Recompute max_k only when the cheap min_k test cannot decide.
            bool a_holds = false;
            if (a_bits && min_k <= *a_bits) {
                // every pair must disagree at or before a_bits
                a_holds = true;
                for (size_t a = 0; a < n && a_holds; ++a) {
                    for (size_t b = a + 1; b < n && a_holds; ++b) {
                        const auto k = systems::first_disagreement(
                            pts[a]->seq, pts[a]->offset + i, pts[b]->seq,
                            pts[b]->offset + i, *a_bits + 1);
                        if (!k) a_holds = false;
                    }
                }
            }
            for (size_t e = 0; e < eps_grid.size(); ++e) b_holds[e] = min_k >= b_bits[e];
            record(i, a_holds, b_holds);
        }
    } else {
        std::vector<Point> state = tuple;
        std::vector<bool> b_holds(eps_grid.size());
        for (uint64_t i = 0; i < schedule.m_max; ++i) {
            QuadraticNumber dmin, dmax;
            bool first = true;
            for (size_t a = 0; a < n; ++a) {
                for (size_t b = a + 1; b < n; ++b) {
                    const QuadraticNumber d = systems::distance(spec, state[a], state[b]);
                    if (first) {
                        dmin = d;
                        dmax = d;
                        first = false;
                    } else {
                        if (d < dmin) dmin = d;
                        if (d > dmax) dmax = d;
                    }
                }
            }
            const bool a_holds = (dmin - delta).sign() > 0;
            for (size_t e = 0; e < eps_grid.size(); ++e)
                b_holds[e] = (dmax - eps_grid[e]).sign() < 0;
            record(i, a_holds, b_holds);
            for (auto& p : state) p = systems::step(spec, p);
        }
    }

    verdict.a_profile.finalize();
    for (auto& b : verdict.b_profiles) b.finalize();
    verdict.dc1_evidence = verdict.recompute_evidence();
    return verdict;
}

// ---------------------------------------------------------------------------
// Distal tuples

struct DistalReport {
    QuadraticNumber min_separation;
    uint64_t attained_at = 0;
    bool certified = false;  // the reported minimum is the true infimum
    std::string note;
};

inline DistalReport distal_tuple_check(const SystemSpec& spec,
                                       const std::vector<Point>& tuple, uint64_t horizon) {
    if (tuple.size() < 2) throw precondition_error("distal check needs n >= 2 points");
    for (const auto& p : tuple) systems::check_belongs(spec, p);
    DistalReport rep;

    // isometries: pairwise distances are constant in time
    const auto& sv = spec.kind().v;
    if (std::holds_alternative<systems::CircleRotation>(sv) ||
        std::holds_alternative<systems::Odometer>(sv)) {
        bool first = true;
        for (size_t a = 0; a < tuple.size(); ++a)
            for (size_t b = a + 1; b < tuple.size(); ++b) {
                const QuadraticNumber d = systems::distance(spec, tuple[a], tuple[b]);
                if (first || d < rep.min_separation) {
                    rep.min_separation = d;
                    first = false;
                }
            }
        rep.attained_at = 0;
        rep.certified = true;
        rep.note = "isometry: pairwise distances are time-invariant";
        return rep;
    }

    // eventually periodic shift tuples: the joint orbit settles into a cycle
    // after the longest prefix; min over preperiod + lcm of periods is exact
    uint64_t scan = horizon;
    bool exact_window = false;
    {
        bool all_pp = true;
        uint64_t pre = 0, l = 1;
        for (const auto& p : tuple) {
            const auto* sp = std::get_if<ShiftPoint>(&p.kind().v);
            if (!sp || !sp->seq.is_prefix_periodic()) {
                all_pp = false;
                break;
            }
            const auto& gen = sp->seq.prefix_periodic();
            pre = std::max<uint64_t>(pre, gen.prefix.size() + sp->offset);
            l = std::lcm<uint64_t>(l, gen.period.size());
            if (l > (uint64_t(1) << 22)) {
                all_pp = false;
                break;
            }
        }
        if (all_pp && pre + l <= horizon) {
            scan = pre + l;
            exact_window = true;
        }
    }

    std::vector<Point> state = tuple;
    bool first = true;
    for (uint64_t i = 0; i < scan; ++i) {
        for (size_t a = 0; a < tuple.size(); ++a) {
            for (size_t b = a + 1; b < tuple.size(); ++b) {
                const QuadraticNumber d = systems::distance(spec, state[a], state[b]);
                if (first || d < rep.min_separation) {
                    rep.min_separation = d;
                    rep.attained_at = i;
                    first = false;
                }
            }
        }
        for (auto& p : state) p = systems::step(spec, p);
        if (!exact_window && i + 1 < scan) {
            bool back = true;
            for (size_t a = 0; a < tuple.size() && back; ++a)
                back = systems::point_equal(state[a], tuple[a]);
            if (back) {
                rep.certified = true;
                rep.note = "joint period " + std::to_string(i + 1) +
                           "; the minimum over one period is the true infimum";
                return rep;
            }
        }
    }
    if (exact_window) {
        rep.certified = true;
        rep.note = "eventually periodic tuple; the minimum over preperiod plus one "
                   "joint period is the true infimum";
    } else {
        rep.note = "minimum over the horizon window; no certificate";
    }
    return rep;
}

// delta_n + eps_n < s exactly, from the separation of a distal anchor tuple.
struct SeparationSplit {
    QuadraticNumber delta;
    QuadraticNumber eps;
};

inline SeparationSplit derive_deltas(const QuadraticNumber& min_separation) {
    if (min_separation.sign() <= 0)
        throw precondition_error("derive_deltas needs a positive separation");
    return {Rational(1, 2) * min_separation, Rational(1, 4) * min_separation};
}

// ---------------------------------------------------------------------------
// Omega-limit estimation

struct OmegaReport {
    std::vector<OpenSetSpec> cells;
    std::vector<uint64_t> hit_counts;  // after burn-in
    size_t visited_cells = 0;
    bool periodic_proximity = false;
    std::optional<uint64_t> detected_period;
    std::string note;
};

namespace detail {

// Is the tail of the orbit near an exact periodic point? For shift points the
// last window of symbols being p-periodic puts the tail within 2^-(L-p) of
// the periodic word; rational rotations are entirely periodic; exact orbit
// periodicity is detected for the rest.
inline void periodic_proximity_scan(const SystemSpec& spec, const Point& start,
                                    uint64_t horizon, OmegaReport& rep) {
    const auto& sv = spec.kind().v;
    if (const auto* rot = std::get_if<systems::CircleRotation>(&sv)) {
        if (rot->angle.is_rational()) {
            rep.periodic_proximity = true;
            rep.detected_period = to_u64(rot->angle.rational_value().get_den());
            rep.note = "rational rotation: every point is periodic";
        }
        return;
    }
    if (std::holds_alternative<systems::FullShift>(sv) ||
        std::holds_alternative<systems::Sft>(sv)) {
        const auto& sp = std::get<ShiftPoint>(start.kind().v);
        const uint64_t window = std::min<uint64_t>(128, horizon / 2);
        if (window < 8) return;
        const uint64_t base = sp.offset + horizon - window;
        for (uint64_t p = 1; p <= std::min<uint64_t>(64, window / 2); ++p) {
            bool periodic = true;
            for (uint64_t j = 0; j + p < window && periodic; ++j)
                periodic = sp.seq.at(base + j) == sp.seq.at(base + j + p);
            if (periodic) {
                rep.periodic_proximity = true;
                rep.detected_period = p;
                rep.note = "tail symbols repeat with period " + std::to_string(p) +
                           " over the last " + std::to_string(window) + " indices";
                return;
            }
        }
        return;
    }
    // generic: exact short-cycle detection near the end of the orbit
    const uint64_t window = std::min<uint64_t>(64, horizon / 4);
    if (window < 2) return;
    Point tail = systems::iterate(spec, start, horizon - window);
    std::vector<Point> seg{tail};
    for (uint64_t j = 1; j < window; ++j) seg.push_back(systems::step(spec, seg.back()));
    for (uint64_t p = 1; p < window; ++p) {
        if (systems::point_equal(seg[0], seg[p])) {
            rep.periodic_proximity = true;
            rep.detected_period = p;
            rep.note = "tail orbit is exactly periodic with period " + std::to_string(p);
            return;
        }
    }
}

}  // namespace detail

inline OmegaReport omega_limit_estimate(const SystemSpec& spec, const Point& x,
                                        uint64_t horizon, uint32_t resolution) {
    if (horizon < 4) throw precondition_error("omega estimate needs horizon >= 4");
    systems::check_belongs(spec, x);
    OmegaReport rep;
    rep.cells = systems::basis(spec, resolution);
    rep.hit_counts.assign(rep.cells.size(), 0);
    const uint64_t burn_in = horizon / 2;
    Point cur = x;
    for (uint64_t i = 0; i < horizon; ++i) {
        if (i >= burn_in) {
            for (size_t c = 0; c < rep.cells.size(); ++c) {
                if (systems::contains(rep.cells[c], cur)) {
                    ++rep.hit_counts[c];
                    break;  // bases are partitions
                }
            }
        }
        cur = systems::step(spec, cur);
    }
    for (uint64_t h : rep.hit_counts)
        if (h > 0) ++rep.visited_cells;
    detail::periodic_proximity_scan(spec, x, horizon, rep);
    if (rep.note.empty()) rep.note = "no short periodic proximity detected";
    return rep;
}

}  // namespace dc1lab::orbitstats
