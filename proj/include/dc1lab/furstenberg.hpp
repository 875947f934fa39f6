#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dc1lab/detail/torus_hitting.hpp"
#include "dc1lab/index_set.hpp"
#include "dc1lab/minimality.hpp"
#include "dc1lab/system.hpp"

namespace dc1lab::furstenberg {

using systems::Arc;
using systems::Box;
using systems::CirclePoint;
using systems::CircleRotation;
using systems::Cylinder;
using systems::DigitCylinder;
using systems::FullShift;
using systems::Odometer;
using systems::OdometerPoint;
using systems::OpenSetSpec;
using systems::Point;
using systems::PointCell;
using systems::ProductOpen;
using systems::ProductPoint;
using systems::ProductSystem;
using systems::QuadraticNumber;
using systems::Restriction;
using systems::Sft;
using systems::ShiftPoint;
using systems::SymbolicSequence;
using systems::SystemSpec;
using systems::TorusAutomorphism;
using systems::TorusPoint;
using systems::Word;

// ---------------------------------------------------------------------------
// Return-time sets N(x, eps) = {i : d(x, f^i(x)) <= eps}

namespace detail {

// smallest K >= 0 with 2^-K <= eps (capped); shift distance <= eps iff the
// sequences agree on a window of length K
inline uint64_t shift_window_for(const QuadraticNumber& eps, uint64_t cap) {
    for (uint64_t k = 0; k <= cap; ++k)
        if ((QuadraticNumber(pow2(-static_cast<long>(k))) - eps).sign() <= 0) return k;
    throw budget_error("epsilon too small for the shift comparison bound");
}

inline IndexSet return_times_impl(const SystemSpec& spec, const Point& x,
                                  const QuadraticNumber& eps, uint64_t horizon) {
    systems::check_belongs(spec, x);
    std::vector<uint64_t> members;
    const auto& sv = spec.kind().v;
    if (const auto* rot = std::get_if<CircleRotation>(&sv)) {
        // wrap distance <= eps  <=>  |cur - base| <= eps or >= 1 - eps;
        // scratch objects keep the loop free of fresh allocations
        const QuadraticNumber base = std::get<CirclePoint>(x.kind().v).x;
        QuadraticNumber cur = base, t, u, scratch;
        const QuadraticNumber one_minus_eps = QuadraticNumber(Rational(1)) - eps;
        const bool eps_big = (eps - QuadraticNumber(Rational(1, 2))).sign() >= 0;
        for (uint64_t i = 0; i < horizon; ++i) {
            bool in = eps_big;
            if (!in) {
                t = cur;
                t -= base;
                t.abs_in_place();
                u = t;
                u -= eps;
                if (u.sign() <= 0) {
                    in = true;
                } else {
                    u = t;
                    u -= one_minus_eps;
                    in = u.sign() >= 0;
                }
            }
            if (in) members.push_back(i);
            systems::add_mod1(cur, rot->angle, scratch);
        }
        return IndexSet(horizon, std::move(members));
    }
    if (std::holds_alternative<FullShift>(sv) || std::holds_alternative<Sft>(sv)) {
        const auto& sp = std::get<ShiftPoint>(x.kind().v);
        const uint64_t window = shift_window_for(eps, systems::kComparisonBound);
        for (uint64_t i = 0; i < horizon; ++i) {
            if (!systems::first_disagreement(sp.seq, sp.offset, sp.seq, sp.offset + i,
                                             window))
                members.push_back(i);
        }
        return IndexSet(horizon, std::move(members));
    }
    if (std::holds_alternative<TorusAutomorphism>(sv)) {
        const auto& tp = std::get<TorusPoint>(x.kind().v);
        QuadraticNumber cx = tp.x, cy = tp.y;
        const auto& ta = std::get<TorusAutomorphism>(sv);
        for (uint64_t i = 0; i < horizon; ++i) {
            const QuadraticNumber d =
                max(systems::detail::circle_distance(tp.x, cx),
                    systems::detail::circle_distance(tp.y, cy));
            if ((d - eps).sign() <= 0) members.push_back(i);
            const QuadraticNumber nx = rational_of(ta.m00) * cx + rational_of(ta.m01) * cy;
            const QuadraticNumber ny = rational_of(ta.m10) * cx + rational_of(ta.m11) * cy;
            cx = nx.mod1();
            cy = ny.mod1();
        }
        return IndexSet(horizon, std::move(members));
    }
    Point cur = x;
    for (uint64_t i = 0; i < horizon; ++i) {
        if ((systems::distance(spec, x, cur) - eps).sign() <= 0) members.push_back(i);
        cur = systems::step(spec, cur);
    }
    return IndexSet(horizon, std::move(members));
}

}  // namespace detail

inline IndexSet return_times(const SystemSpec& spec, const Point& x,
                             const QuadraticNumber& eps, uint64_t horizon) {
    if (eps.sign() <= 0) throw precondition_error("return_times needs eps > 0");
    return detail::return_times_impl(spec, x, eps, horizon);
}

// Bohr-set generator: N(y, delta) of a minimal equicontinuous stock system
// (rotation or odometer); delta = 0 is allowed and gives exact returns.
inline IndexSet bohr_set(const SystemSpec& spec, const Point& y,
                         const QuadraticNumber& delta, uint64_t horizon) {
    const auto& sv = spec.kind().v;
    if (!std::holds_alternative<CircleRotation>(sv) && !std::holds_alternative<Odometer>(sv))
        throw precondition_error("bohr_set needs a circle rotation or an odometer");
    if (delta.sign() < 0) throw precondition_error("bohr_set needs delta >= 0");
    return detail::return_times_impl(spec, y, delta, horizon);
}

// ---------------------------------------------------------------------------
// Hitting-time sets N(U, V) = {i : f^i(U) meets V}
//
// Scanners advance i by one and decide hits exactly per system kind. The
// optional target shift j tests against f^-j(V) instead of V (used by the
// shifted-target inclusion N(U, f^-j(V)) + j subset N(U, V)).

namespace detail {

struct HitScanner {
    virtual ~HitScanner() = default;
    virtual bool test() = 0;     // hit at the current time?
    virtual void advance() = 0;  // move to the next time step
};

class FullShiftScanner final : public HitScanner {
public:
    FullShiftScanner(Word u, Word v, uint64_t start_shift)
        : u_(std::move(u)), v_(std::move(v)), shift_(start_shift) {}
    bool test() override {
        for (uint64_t p = shift_; p < u_.size(); ++p) {
            const uint64_t q = p - shift_;
            if (q >= v_.size()) break;
            if (u_[p] != v_[q]) return false;
        }
        return true;
    }
    void advance() override { ++shift_; }

private:
    Word u_, v_;
    uint64_t shift_;
};

// SFT feasibility: does an allowed infinite sequence exist with word u at
// position 0 and word v at the current shift? Decided by a DP over the
// last (k-1) symbols, ending in a state with an infinite continuation.
class SftScanner final : public HitScanner {
public:
    SftScanner(const Sft& sft, Word u, Word v, uint64_t start_shift)
        : alphabet_(sft.alphabet), forbidden_(sft.forbidden), u_(std::move(u)),
          v_(std::move(v)), shift_(start_shift) {
        k_ = 1;
        for (const auto& f : forbidden_) k_ = std::max(k_, f.size());
        double states = 1;
        for (size_t i = 0; i + 1 < k_; ++i) {
            states *= alphabet_;
            if (states > 4096) throw budget_error("SFT state space too large for hitting");
        }
        build_alive();
    }
    bool test() override {
        const uint64_t len = std::max<uint64_t>(u_.size(), shift_ + v_.size());
        // frontier of reachable suffix states (words of length <= k_-1)
        std::vector<Word> frontier{{}};
        for (uint64_t pos = 0; pos < len; ++pos) {
            std::vector<Word> next;
            for (const auto& st : frontier) {
                for (Symbol s = 0; s < alphabet_; ++s) {
                    if (pos < u_.size() && u_[pos] != s) continue;
                    if (pos >= shift_ && pos - shift_ < v_.size() && v_[pos - shift_] != s)
                        continue;
                    Word w = st;
                    w.push_back(s);
                    if (has_forbidden_suffix(w)) continue;
                    if (w.size() > k_ - 1) w.erase(w.begin());
                    push_unique(next, std::move(w));
                }
            }
            frontier = std::move(next);
            if (frontier.empty()) return false;
        }
        for (const auto& st : frontier)
            if (st.size() < k_ - 1 || is_alive(st)) return true;
        return false;
    }
    void advance() override { ++shift_; }

private:
    using Symbol = systems::Symbol;
    void build_alive() {
        // states: allowed words of length k_-1; prune dead ends
        Word cur;
        auto gen = [&](auto&& self, size_t depth) -> void {
            if (depth == k_ - 1) {
                if (!has_forbidden_factor(cur)) states_.push_back(cur);
                return;
            }
            for (Symbol s = 0; s < alphabet_; ++s) {
                cur.push_back(s);
                self(self, depth + 1);
                cur.pop_back();
            }
        };
        gen(gen, 0);
        alive_.assign(states_.size(), true);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < states_.size(); ++i) {
                if (!alive_[i]) continue;
                bool edge = false;
                for (Symbol s = 0; s < alphabet_ && !edge; ++s) {
                    Word w = states_[i];
                    w.push_back(s);
                    if (has_forbidden_suffix(w)) continue;
                    if (w.size() > k_ - 1) w.erase(w.begin());
                    const long j = index_of(w);
                    if (j >= 0 && alive_[static_cast<size_t>(j)]) edge = true;
                }
                if (!edge) {
                    alive_[i] = false;
                    changed = true;
                }
            }
        }
    }
    bool has_forbidden_factor(const Word& w) const {
        for (const auto& f : forbidden_) {
            if (f.size() > w.size()) continue;
            for (size_t i = 0; i + f.size() <= w.size(); ++i)
                if (std::equal(f.begin(), f.end(), w.begin() + static_cast<long>(i)))
                    return true;
        }
        return false;
    }
    bool has_forbidden_suffix(const Word& w) const {
        for (const auto& f : forbidden_) {
            if (f.size() > w.size()) continue;
            if (std::equal(f.begin(), f.end(), w.end() - static_cast<long>(f.size())))
                return true;
        }
        return false;
    }
    long index_of(const Word& w) const {
        for (size_t i = 0; i < states_.size(); ++i)
            if (states_[i] == w) return static_cast<long>(i);
        return -1;
    }
    bool is_alive(const Word& w) const {
        const long i = index_of(w);
        return i >= 0 && alive_[static_cast<size_t>(i)];
    }
    static void push_unique(std::vector<Word>& v, Word w) {
        for (const auto& x : v)
            if (x == w) return;
        v.push_back(std::move(w));
    }

    uint32_t alphabet_;
    std::vector<Word> forbidden_;
    size_t k_;
    std::vector<Word> states_;
    std::vector<bool> alive_;
    Word u_, v_;
    uint64_t shift_;
};

class RotationScanner final : public HitScanner {
public:
    // g = relative offset of U's start to V's start after i steps; U and V
    // half-open of lengths lu, lv; hit iff g < lv or g + lu > 1.
    RotationScanner(const CircleRotation& rot, const Arc& u, const Arc& v,
                    uint64_t target_shift)
        : angle_(rot.angle), lu_(2 * u.radius), lv_(2 * v.radius) {
        QuadraticNumber su = u.center - QuadraticNumber(u.radius);
        QuadraticNumber sv = v.center - QuadraticNumber(v.radius);
        QuadraticNumber g = su - sv;
        for (uint64_t t = 0; t < target_shift; ++t) g += angle_;  // f^-j(V) start shift
        g_ = g.mod1();
    }
    bool test() override {
        if ((g_ - QuadraticNumber(lv_)).sign() < 0) return true;
        return (g_ + QuadraticNumber(lu_) - QuadraticNumber(Rational(1))).sign() > 0;
    }
    void advance() override { g_ = systems::detail::rotate_once(g_, angle_); }

private:
    QuadraticNumber angle_, g_;
    Rational lu_, lv_;
};

class OdometerScanner final : public HitScanner {
public:
    // T^i(U) fixes the first |u| digits to val(u) + i; compatibility with the
    // target is a congruence mod base^min(|u|, |v|). The shifted target
    // f^-j(V) replaces val(v) by val(v) - j.
    OdometerScanner(const Odometer& od, const Word& u, const Word& v,
                    uint64_t target_shift) {
        const size_t r = std::min(u.size(), v.size());
        mod_ = 1;
        for (size_t i = 0; i < r; ++i) mod_ *= od.base;
        Integer valu(0), valv(0), place(1);
        for (size_t i = 0; i < r; ++i) {
            valu += place * static_cast<long>(u[i]);
            valv += place * static_cast<long>(v[i]);
            place *= od.base;
        }
        valv -= Integer(static_cast<unsigned long>(target_shift));
        diff_ = ((valv - valu) % mod_ + mod_) % mod_;
    }
    bool test() override { return diff_ == 0; }
    void advance() override {
        diff_ -= 1;
        if (diff_ < 0) diff_ += mod_;
    }

private:
    Integer mod_, diff_;
};

class TorusScanner final : public HitScanner {
public:
    TorusScanner(const TorusAutomorphism& ta, const Box& u, const Box& v,
                 uint64_t target_shift, uint64_t cell_budget)
        : ta_(ta), budget_(cell_budget) {
        if (target_shift != 0)
            throw precondition_error("torus hitting does not support shifted targets");
        a1_ = 1; a2_ = 0; b1_ = 0; b2_ = 1;  // identity
        u0x_ = u.x.center - QuadraticNumber(u.x.radius);
        u0y_ = u.y.center - QuadraticNumber(u.y.radius);
        wux_ = 2 * u.x.radius;
        wuy_ = 2 * u.y.radius;
        v0x_ = v.x.center - QuadraticNumber(v.x.radius);
        v0y_ = v.y.center - QuadraticNumber(v.y.radius);
        wvx_ = 2 * v.x.radius;
        wvy_ = 2 * v.y.radius;
    }
    bool test() override {
        detail::TorusHitTester t(a1_, a2_, b1_, b2_, u0x_, u0y_, wux_, wuy_, v0x_, v0y_,
                                 wvx_, wvy_);
        return t.run(budget_).hit;
    }
    void advance() override {
        // columns of M^(i+1) = M * M^i
        const Integer na1 = make_integer(ta_.m00) * a1_ + make_integer(ta_.m01) * a2_;
        const Integer na2 = make_integer(ta_.m10) * a1_ + make_integer(ta_.m11) * a2_;
        const Integer nb1 = make_integer(ta_.m00) * b1_ + make_integer(ta_.m01) * b2_;
        const Integer nb2 = make_integer(ta_.m10) * b1_ + make_integer(ta_.m11) * b2_;
        a1_ = na1;
        a2_ = na2;
        b1_ = nb1;
        b2_ = nb2;
    }

private:
    TorusAutomorphism ta_;
    Integer a1_, a2_, b1_, b2_;
    QuadraticNumber u0x_, u0y_, v0x_, v0y_;
    Rational wux_, wuy_, wvx_, wvy_;
    uint64_t budget_;
};

class RestrictionScanner final : public HitScanner {
public:
    RestrictionScanner(const Restriction& r, const Point& u, const Point& v,
                       uint64_t target_shift) {
        const size_t n = r.points.size();
        auto index_of = [&](const Point& p) -> size_t {
            for (size_t i = 0; i < n; ++i)
                if (systems::point_equal(p, r.points[i])) return i;
            throw precondition_error("point cell is not in the restriction set");
        };
        succ_.resize(n);
        for (size_t i = 0; i < n; ++i)
            succ_[i] = index_of(systems::step(r.parent, r.points[i]));
        cur_ = index_of(u);
        // targets: preimages of v under f^j within the finite set
        const size_t vi = index_of(v);
        target_.assign(n, false);
        for (size_t i = 0; i < n; ++i) {
            size_t w = i;
            for (uint64_t t = 0; t < target_shift; ++t) w = succ_[w];
            if (w == vi) target_[i] = true;
        }
    }
    bool test() override { return target_[cur_]; }
    void advance() override { cur_ = succ_[cur_]; }

private:
    std::vector<size_t> succ_;
    std::vector<bool> target_;
    size_t cur_ = 0;
};

class ProductScanner final : public HitScanner {
public:
    explicit ProductScanner(std::vector<std::unique_ptr<HitScanner>> parts)
        : parts_(std::move(parts)) {}
    bool test() override {
        for (auto& p : parts_)
            if (!p->test()) return false;
        return true;
    }
    void advance() override {
        for (auto& p : parts_) p->advance();
    }

private:
    std::vector<std::unique_ptr<HitScanner>> parts_;
};

inline std::unique_ptr<HitScanner> make_scanner(const SystemSpec& spec,
                                                const OpenSetSpec& u,
                                                const OpenSetSpec& v,
                                                uint64_t target_shift,
                                                uint64_t torus_cell_budget) {
    const auto& sv = spec.kind().v;
    const auto& uv = u.kind().v;
    const auto& vv = v.kind().v;
    if (std::holds_alternative<FullShift>(sv)) {
        const auto* cu = std::get_if<Cylinder>(&uv);
        const auto* cv = std::get_if<Cylinder>(&vv);
        if (!cu || !cv)
            throw precondition_error("full shift hitting needs cylinder open sets");
        return std::make_unique<FullShiftScanner>(cu->word, cv->word, target_shift);
    }
    if (const auto* sft = std::get_if<Sft>(&sv)) {
        const auto* cu = std::get_if<Cylinder>(&uv);
        const auto* cv = std::get_if<Cylinder>(&vv);
        if (!cu || !cv) throw precondition_error("SFT hitting needs cylinder open sets");
        return std::make_unique<SftScanner>(*sft, cu->word, cv->word, target_shift);
    }
    if (const auto* rot = std::get_if<CircleRotation>(&sv)) {
        const auto* au = std::get_if<Arc>(&uv);
        const auto* av = std::get_if<Arc>(&vv);
        if (!au || !av) throw precondition_error("rotation hitting needs arcs");
        return std::make_unique<RotationScanner>(*rot, *au, *av, target_shift);
    }
    if (const auto* od = std::get_if<Odometer>(&sv)) {
        const auto* du = std::get_if<DigitCylinder>(&uv);
        const auto* dv = std::get_if<DigitCylinder>(&vv);
        if (!du || !dv) throw precondition_error("odometer hitting needs digit cylinders");
        return std::make_unique<OdometerScanner>(*od, du->digits, dv->digits, target_shift);
    }
    if (const auto* ta = std::get_if<TorusAutomorphism>(&sv)) {
        const auto* bu = std::get_if<Box>(&uv);
        const auto* bv = std::get_if<Box>(&vv);
        if (!bu || !bv) throw precondition_error("torus hitting needs boxes");
        return std::make_unique<TorusScanner>(*ta, *bu, *bv, target_shift,
                                              torus_cell_budget);
    }
    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        const auto* pu = std::get_if<ProductOpen>(&uv);
        const auto* pv = std::get_if<ProductOpen>(&vv);
        if (!pu || !pv || pu->parts.size() != pr->parts.size() ||
            pv->parts.size() != pr->parts.size())
            throw precondition_error("product hitting needs matching product opens");
        std::vector<std::unique_ptr<HitScanner>> parts;
        for (size_t i = 0; i < pr->parts.size(); ++i)
            parts.push_back(make_scanner(pr->parts[i], pu->parts[i], pv->parts[i],
                                         target_shift, torus_cell_budget));
        return std::make_unique<ProductScanner>(std::move(parts));
    }
    const auto& r = std::get<Restriction>(sv);
    const auto* cu = std::get_if<PointCell>(&uv);
    const auto* cv = std::get_if<PointCell>(&vv);
    if (!cu || !cv)
        throw precondition_error("restriction hitting needs point cells");
    return std::make_unique<RestrictionScanner>(r, cu->p, cv->p, target_shift);
}

}  // namespace detail

inline constexpr uint64_t kTorusCellBudget = 4'000'000;

// N(U, f^-j(V)) below the horizon; j = 0 gives plain N(U, V).
inline IndexSet hitting_times_shifted(const SystemSpec& spec, const OpenSetSpec& u,
                                      const OpenSetSpec& v, uint64_t target_shift,
                                      uint64_t horizon,
                                      uint64_t torus_cell_budget = kTorusCellBudget) {
    auto scanner = detail::make_scanner(spec, u, v, target_shift, torus_cell_budget);
    std::vector<uint64_t> members;
    for (uint64_t i = 0; i < horizon; ++i) {
        if (scanner->test()) members.push_back(i);
        scanner->advance();
    }
    return IndexSet(horizon, std::move(members));
}

inline IndexSet hitting_times(const SystemSpec& spec, const OpenSetSpec& u,
                              const OpenSetSpec& v, uint64_t horizon,
                              uint64_t torus_cell_budget = kTorusCellBudget) {
    return hitting_times_shifted(spec, u, v, 0, horizon, torus_cell_budget);
}

// ---------------------------------------------------------------------------
// F-recurrence estimation

struct RecurrenceCell {
    size_t point_index;
    QuadraticNumber eps;
    FamilyVerdict verdict;
};

struct RecurrenceReport {
    std::vector<RecurrenceCell> table;
    std::vector<FamilyVerdict> per_point;  // conjunction over the eps grid
    std::string semantics =
        "IN: every tested eps produced finite-horizon family membership evidence; "
        "OUT: some eps refuted it within the horizon; UNKNOWN propagates";
};

inline RecurrenceReport recurrence_test(const SystemSpec& spec,
                                        const std::vector<Point>& points,
                                        const Family& family,
                                        const std::vector<QuadraticNumber>& eps_grid,
                                        uint64_t horizon) {
    if (eps_grid.empty()) throw precondition_error("empty eps grid");
    for (size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i + 1] < eps_grid[i]))
            throw precondition_error("eps grid must be strictly decreasing");
    RecurrenceReport rep;
    for (size_t pi = 0; pi < points.size(); ++pi) {
        FamilyVerdict overall;
        overall.status = FamilyStatus::In;
        for (const auto& eps : eps_grid) {
            const IndexSet n = return_times(spec, points[pi], eps, horizon);
            FamilyVerdict v = family_test(n, family);
            rep.table.push_back({pi, eps, v});
            if (v.status == FamilyStatus::Out) {
                overall = v;
                overall.note = "refuted at eps = " + eps.str() + "; " + v.note;
            } else if (v.status == FamilyStatus::Unknown &&
                       overall.status == FamilyStatus::In) {
                overall = v;
            } else if (overall.status == FamilyStatus::In) {
                overall.witness = v.witness;
            }
        }
        if (overall.status == FamilyStatus::In)
            overall.note = "membership evidence at every eps in the grid";
        rep.per_point.push_back(overall);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Inclusion checkers feeding the recurrence and product-transitivity arguments

// Checks N(f^i(p), eps/3) subset N(q, eps) for the first i below the horizon
// with d(q, f^i(p)) <= delta(eps/3), delta taken from the certified
// equicontinuity modulus of the subsystem.
struct InclusionReport {
    bool applicable = false;  // found the required i (UNKNOWN otherwise)
    uint64_t i = 0;
    QuadraticNumber delta;
    uint64_t violations = 0;
    std::optional<uint64_t> first_violation;
    std::string note;
    bool pass() const { return applicable && violations == 0; }
};

inline InclusionReport lemma12_inclusion_check(const SystemSpec& lambda_spec,
                                               const Point& p, const Point& q,
                                               const QuadraticNumber& eps,
                                               uint64_t horizon) {
    if (eps.sign() <= 0) throw precondition_error("eps must be positive");
    const auto minrep = systems::check_minimal_equicontinuous(lambda_spec, horizon);
    if (minrep.equicontinuous != systems::Verdict::Certified)
        throw precondition_error(
            "lemma12 check needs a certified equicontinuous subsystem");
    const SystemSpec* ambient = &lambda_spec;
    if (const auto* r = std::get_if<Restriction>(&lambda_spec.kind().v))
        ambient = &r->parent;

    const QuadraticNumber third = Rational(1, 3) * eps;
    const QuadraticNumber delta = minrep.modulus.delta_for(third);

    InclusionReport rep;
    rep.delta = delta;
    Point cur = p;
    std::optional<uint64_t> found;
    for (uint64_t i = 0; i < horizon; ++i) {
        if ((systems::distance(*ambient, q, cur) - delta).sign() <= 0) {
            found = i;
            break;
        }
        cur = systems::step(*ambient, cur);
    }
    if (!found) {
        rep.applicable = false;
        rep.note = "no i below the horizon with d(q, f^i(p)) <= delta; "
                   "the minimality hypothesis is not witnessed";
        return rep;
    }
    rep.applicable = true;
    rep.i = *found;
    const IndexSet inner = return_times(*ambient, cur, third, horizon);
    const IndexSet outer = return_times(*ambient, q, eps, horizon);
    for (uint64_t m : inner.members()) {
        if (!outer.contains(m)) {
            ++rep.violations;
            if (!rep.first_violation) rep.first_violation = m;
        }
    }
    rep.note = "N(f^i(p), eps/3) subset N(q, eps) checked index-wise at the horizon";
    return rep;
}

// The two inclusions behind product transitivity from return times:
//  (1) Delta(N(y, delta)) subset {i : g^i(closed ball) meets the ball}
//  (2) N(U, f^-j(V)) + j subset N(U, V)
// plus product-transitivity evidence on sampled basis pairs of g.
struct Lemma13Report {
    uint64_t inclusion1_violations = 0;
    std::optional<uint64_t> inclusion1_first_violation;
    uint64_t inclusion2_violations = 0;
    std::optional<uint64_t> inclusion2_first_violation;
    struct PairEvidence {
        size_t u1, v1;
        std::optional<uint64_t> common_index;  // in N_f(U,V) and N_g(U1,V1)
    };
    std::vector<PairEvidence> product_evidence;
    std::string note;
    bool pass() const { return inclusion1_violations == 0 && inclusion2_violations == 0; }
};

namespace detail {

// {i < horizon : g^i(B_delta(y)) meets B_delta(y)} with closed balls, exact.
inline IndexSet ball_hitting(const SystemSpec& g_spec, const Point& y,
                             const QuadraticNumber& delta, uint64_t horizon) {
    const auto& sv = g_spec.kind().v;
    std::vector<uint64_t> members;
    if (const auto* rot = std::get_if<CircleRotation>(&sv)) {
        // rotated ball meets the ball iff the rotation offset has wrap
        // distance <= 2 delta from 0
        QuadraticNumber off;  // i * angle mod 1
        const QuadraticNumber bound = Rational(2) * delta;
        for (uint64_t i = 0; i < horizon; ++i) {
            if ((systems::detail::circle_distance(off, QuadraticNumber()) - bound).sign() <= 0)
                members.push_back(i);
            off = systems::detail::rotate_once(off, rot->angle);
        }
        return IndexSet(horizon, std::move(members));
    }
    if (const auto* r = std::get_if<Restriction>(&sv)) {
        // finite enumeration over ball members
        std::vector<size_t> ball;
        for (size_t i = 0; i < r->points.size(); ++i)
            if ((systems::distance(r->parent, y, r->points[i]) - delta).sign() <= 0)
                ball.push_back(i);
        std::vector<size_t> succ(r->points.size());
        for (size_t i = 0; i < r->points.size(); ++i) {
            const Point next = systems::step(r->parent, r->points[i]);
            for (size_t j = 0; j < r->points.size(); ++j)
                if (systems::point_equal(next, r->points[j])) {
                    succ[i] = j;
                    break;
                }
        }
        std::vector<bool> in_ball(r->points.size(), false);
        for (size_t i : ball) in_ball[i] = true;
        std::vector<size_t> cur = ball;
        for (uint64_t i = 0; i < horizon; ++i) {
            bool hit = false;
            for (size_t idx : cur)
                if (in_ball[idx]) {
                    hit = true;
                    break;
                }
            if (hit) members.push_back(i);
            for (auto& idx : cur) idx = succ[idx];
        }
        return IndexSet(horizon, std::move(members));
    }
    throw precondition_error("ball hitting supports rotations and finite restrictions");
}

}  // namespace detail

inline Lemma13Report lemma13_inclusion_check(const SystemSpec& g_spec, const Point& y,
                                             const QuadraticNumber& delta,
                                             const SystemSpec& f_spec,
                                             const OpenSetSpec& u, const OpenSetSpec& v,
                                             uint64_t j, uint64_t horizon) {
    if (delta.sign() < 0) throw precondition_error("delta must be >= 0");
    if (j >= horizon) throw precondition_error("j must be below the horizon");
    Lemma13Report rep;

    // inclusion 1 on the g side
    const IndexSet returns = detail::return_times_impl(g_spec, y, delta, horizon);
    const IndexSet diffs = difference_set(returns);
    const IndexSet ballhit = detail::ball_hitting(g_spec, y, delta, horizon);
    for (uint64_t m : diffs.members())
        if (!ballhit.contains(m)) {
            ++rep.inclusion1_violations;
            if (!rep.inclusion1_first_violation) rep.inclusion1_first_violation = m;
        }

    // inclusion 2 on the f side
    const IndexSet shifted = hitting_times_shifted(f_spec, u, v, j, horizon - j);
    const IndexSet plain = hitting_times(f_spec, u, v, horizon);
    for (uint64_t m : shifted.members())
        if (!plain.contains(m + j)) {
            ++rep.inclusion2_violations;
            if (!rep.inclusion2_first_violation) rep.inclusion2_first_violation = m + j;
        }

    // product-transitivity evidence: common hit indices for sampled pairs
    std::vector<OpenSetSpec> g_cells;
    if (std::holds_alternative<CircleRotation>(g_spec.kind().v))
        g_cells = systems::basis(g_spec, 2);
    else
        g_cells = systems::basis(g_spec, 1);
    const size_t cap = std::min<size_t>(g_cells.size(), 4);
    for (size_t a = 0; a < cap; ++a) {
        for (size_t b = 0; b < cap; ++b) {
            const IndexSet ng = hitting_times(g_spec, g_cells[a], g_cells[b], horizon);
            std::optional<uint64_t> common;
            for (uint64_t m : plain.members())
                if (ng.contains(m)) {
                    common = m;
                    break;
                }
            rep.product_evidence.push_back({a, b, common});
        }
    }
    rep.note = "inclusions checked exactly at the horizon; product evidence lists the "
               "first common hitting index per sampled basis pair";
    return rep;
}

// ---------------------------------------------------------------------------
// Transitivity evidence matrices

struct Plain {};
struct Total {
    uint64_t max_power;
};
struct WeakMixing {};
struct ProductWith {
    SystemSpec restriction;
};
using TransitivityMode = std::variant<Plain, Total, WeakMixing, ProductWith>;

struct TransitivityEntry {
    size_t u, v;
    std::optional<uint64_t> first_hit;  // IN with witness, or UNKNOWN
};

struct TransitivityMatrix {
    std::string label;
    std::vector<TransitivityEntry> entries;
    size_t in_count = 0;
    size_t unknown_count = 0;
    std::optional<uint64_t> min_hit, max_hit;
};

struct TransitivityReport {
    std::string mode;
    uint32_t resolution;
    uint64_t horizon;
    std::vector<OpenSetSpec> cells;
    std::vector<TransitivityMatrix> matrices;
    std::string semantics =
        "IN(i): witnessed intersection f^i(U) and V at the first such i; UNKNOWN: no "
        "hit below the horizon, which is never a refutation; per-pair evidence only, "
        "no family-membership claim is aggregated";
};

inline constexpr uint64_t kTransitivityWorkCap = 50'000'000;

namespace detail {

inline TransitivityMatrix run_matrix(const SystemSpec& spec,
                                     const std::vector<OpenSetSpec>& cells,
                                     uint64_t horizon, uint64_t stride,
                                     const std::string& label) {
    TransitivityMatrix m;
    m.label = label;
    for (size_t a = 0; a < cells.size(); ++a) {
        for (size_t b = 0; b < cells.size(); ++b) {
            auto scanner = make_scanner(spec, cells[a], cells[b], 0, kTorusCellBudget);
            std::optional<uint64_t> hit;
            for (uint64_t i = 0; i < horizon; ++i) {
                if (scanner->test()) {
                    hit = i;
                    break;
                }
                for (uint64_t s = 0; s < stride; ++s) scanner->advance();
            }
            m.entries.push_back({a, b, hit});
            if (hit) {
                ++m.in_count;
                m.min_hit = m.min_hit ? std::min(*m.min_hit, *hit) : *hit;
                m.max_hit = m.max_hit ? std::max(*m.max_hit, *hit) : *hit;
            } else {
                ++m.unknown_count;
            }
        }
    }
    return m;
}

}  // namespace detail

inline TransitivityReport transitivity_report(const SystemSpec& spec, uint32_t resolution,
                                              uint64_t horizon,
                                              const TransitivityMode& mode,
                                              uint64_t work_cap = kTransitivityWorkCap) {
    TransitivityReport rep;
    rep.resolution = resolution;
    rep.horizon = horizon;

    SystemSpec target = spec;
    uint64_t powers = 1;
    if (std::holds_alternative<Plain>(mode)) {
        rep.mode = "plain";
    } else if (const auto* t = std::get_if<Total>(&mode)) {
        rep.mode = "total";
        powers = t->max_power;
        if (powers == 0) throw precondition_error("total transitivity needs K >= 1");
    } else if (std::holds_alternative<WeakMixing>(mode)) {
        rep.mode = "weak_mixing";
        target = systems::make_product({spec, spec});
    } else {
        rep.mode = "product_with";
        target = systems::make_product(
            {std::get<ProductWith>(mode).restriction, spec});
    }

    rep.cells = systems::basis(target, resolution);
    const size_t pairs = rep.cells.size() * rep.cells.size();
    if (pairs * horizon * powers > work_cap)
        throw budget_error("transitivity matrix over budget; lower the resolution "
                           "or horizon");
    if (powers == 1) {
        rep.matrices.push_back(
            detail::run_matrix(target, rep.cells, horizon, 1, rep.mode));
    } else {
        for (uint64_t k = 1; k <= powers; ++k)
            rep.matrices.push_back(detail::run_matrix(target, rep.cells, horizon, k,
                                                      "power " + std::to_string(k)));
    }
    return rep;
}

}  // namespace dc1lab::furstenberg
