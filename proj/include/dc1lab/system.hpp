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
#include "dc1lab/quadratic.hpp"
#include "dc1lab/sequence.hpp"

namespace dc1lab::systems {

class SystemSpec;
class Point;
class OpenSetSpec;
struct SystemKind;
struct PointKind;
struct OpenSetKind;

// Shift distance / sequence equality comparison bound: block-program
// sequences agreeing through this many indices are reported at distance 0
// with the certificate flag cleared.
inline constexpr uint64_t kComparisonBound = uint64_t(1) << 16;

// ---------------------------------------------------------------------------
// System descriptions

class SystemSpec {
public:
    SystemSpec();  // full shift on 2 symbols
    explicit SystemSpec(std::shared_ptr<const SystemKind> k) : k_(std::move(k)) {}
    const SystemKind& kind() const { return *k_; }

    friend bool operator==(const SystemSpec& a, const SystemSpec& b);
    friend bool operator!=(const SystemSpec& a, const SystemSpec& b) { return !(a == b); }

private:
    std::shared_ptr<const SystemKind> k_;
};

class Point {
public:
    Point();
    explicit Point(std::shared_ptr<const PointKind> k) : k_(std::move(k)) {}
    const PointKind& kind() const { return *k_; }

private:
    std::shared_ptr<const PointKind> k_;
};

class OpenSetSpec {
public:
    explicit OpenSetSpec(std::shared_ptr<const OpenSetKind> k) : k_(std::move(k)) {}
    const OpenSetKind& kind() const { return *k_; }

private:
    std::shared_ptr<const OpenSetKind> k_;
};

struct FullShift {
    uint32_t alphabet;
    friend bool operator==(const FullShift&, const FullShift&) = default;
};

// Subshift of finite type: full shift minus sequences containing a forbidden
// factor. Construction rejects empty languages (checked on the word graph).
struct Sft {
    uint32_t alphabet;
    std::vector<Word> forbidden;
    friend bool operator==(const Sft&, const Sft&) = default;
};

struct CircleRotation {
    QuadraticNumber angle;  // in [0,1)
    friend bool operator==(const CircleRotation&, const CircleRotation&) = default;
};

struct Odometer {
    uint32_t base;
    friend bool operator==(const Odometer&, const Odometer&) = default;
};

struct TorusAutomorphism {
    long long m00, m01, m10, m11;
    long long det() const { return m00 * m11 - m01 * m10; }
    long long trace() const { return m00 + m11; }
    friend bool operator==(const TorusAutomorphism&, const TorusAutomorphism&) = default;
};

struct ProductSystem {
    std::vector<SystemSpec> parts;
};

// Finite forward-invariant subsystem of a parent system.
struct Restriction {
    SystemSpec parent;
    std::vector<Point> points;
};

struct SystemKind {
    std::variant<FullShift, Sft, CircleRotation, Odometer, TorusAutomorphism,
                 ProductSystem, Restriction>
        v;
};

// ---------------------------------------------------------------------------
// Points

struct ShiftPoint {
    SymbolicSequence seq;
    uint64_t offset = 0;  // the point is seq shifted left by offset
    Symbol at(uint64_t i) const { return seq.at(offset + i); }
};

struct CirclePoint {
    QuadraticNumber x;  // in [0,1)
};

struct OdometerPoint {
    PrefixPeriodic digits;
};

struct TorusPoint {
    QuadraticNumber x, y;  // both in [0,1)
};

struct ProductPoint {
    std::vector<Point> parts;
};

struct PointKind {
    std::variant<ShiftPoint, CirclePoint, OdometerPoint, TorusPoint, ProductPoint> v;
};

// ---------------------------------------------------------------------------
// Basis open sets

struct Cylinder {
    Word word;  // fixed at positions 0..|word|-1
};

// Half-open arc [center - radius, center + radius) on the circle, so the
// resolution-r basis is an exact partition.
struct Arc {
    QuadraticNumber center;
    Rational radius;
};

struct Box {
    Arc x, y;
};

struct DigitCylinder {
    Word digits;
};

// Singleton cell of a finite restriction.
struct PointCell {
    Point p;
};

struct ProductOpen {
    std::vector<OpenSetSpec> parts;
};

struct OpenSetKind {
    std::variant<Cylinder, Arc, Box, DigitCylinder, PointCell, ProductOpen> v;
};

// ---------------------------------------------------------------------------
// Constructors with invariant checks

namespace detail {

inline void check_word_alphabet(const Word& w, uint32_t alphabet, const char* what) {
    for (Symbol s : w)
        if (s >= alphabet)
            throw precondition_error(std::string(what) + ": symbol outside alphabet");
}

// The SFT language is nonempty iff the word graph on allowed (k-1)-words,
// pruned of dead ends, retains a vertex.
inline void check_sft_nonempty(uint32_t alphabet, const std::vector<Word>& forbidden) {
    size_t k = 1;
    for (const auto& w : forbidden) {
        if (w.empty()) throw precondition_error("SFT: empty forbidden word");
        if (w.size() > 32) throw precondition_error("SFT: forbidden word longer than 32");
        k = std::max(k, w.size());
    }
    auto has_forbidden_factor = [&](const Word& w) {
        for (const auto& f : forbidden) {
            if (f.size() > w.size()) continue;
            for (size_t i = 0; i + f.size() <= w.size(); ++i)
                if (std::equal(f.begin(), f.end(), w.begin() + static_cast<long>(i)))
                    return true;
        }
        return false;
    };
    // vertices: allowed words of length k-1 (the single empty word if k == 1)
    double count = 1;
    for (size_t i = 0; i + 1 < k; ++i) {
        count *= alphabet;
        if (count > (1 << 22)) throw budget_error("SFT word graph too large");
    }
    std::vector<Word> vertices;
    Word cur;
    auto gen = [&](auto&& self, size_t depth) -> void {
        if (depth == k - 1) {
            if (!has_forbidden_factor(cur)) vertices.push_back(cur);
            return;
        }
        for (Symbol s = 0; s < alphabet; ++s) {
            cur.push_back(s);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    gen(gen, 0);
    // prune vertices with no allowed outgoing edge until stable
    bool changed = true;
    std::vector<bool> alive(vertices.size(), true);
    auto index_of = [&](const Word& w) -> long {
        for (size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == w) return static_cast<long>(i);
        return -1;
    };
    while (changed) {
        changed = false;
        for (size_t i = 0; i < vertices.size(); ++i) {
            if (!alive[i]) continue;
            bool has_edge = false;
            for (Symbol s = 0; s < alphabet && !has_edge; ++s) {
                Word w = vertices[i];
                w.push_back(s);
                if (has_forbidden_factor(w)) continue;
                Word next(w.begin() + 1, w.end());
                const long j = k == 1 ? static_cast<long>(i) : index_of(next);
                if (j >= 0 && alive[static_cast<size_t>(j)]) has_edge = true;
            }
            if (!has_edge) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    if (std::none_of(alive.begin(), alive.end(), [](bool b) { return b; }))
        throw precondition_error("SFT language is empty");
}

// Does an infinite allowed sequence start with this word? A word can avoid
// every forbidden factor yet still be a dead end (every continuation is
// eventually forbidden), so cylinder nonemptiness needs the pruned word graph.
inline bool sft_cylinder_nonempty(uint32_t alphabet, const std::vector<Word>& forbidden,
                                  const Word& word) {
    size_t k = 1;
    for (const auto& f : forbidden) k = std::max(k, f.size());
    auto has_forbidden_suffix = [&](const Word& w) {
        for (const auto& f : forbidden) {
            if (f.size() > w.size()) continue;
            if (std::equal(f.begin(), f.end(), w.end() - static_cast<long>(f.size())))
                return true;
        }
        return false;
    };
    // frontier of suffix states after consuming the word, then search for a
    // lasso (any state reachable twice) proving infinite extendability
    std::vector<Word> frontier{{}};
    auto push_unique = [](std::vector<Word>& v, Word w) {
        for (const auto& x : v)
            if (x == w) return;
        v.push_back(std::move(w));
    };
    auto advance = [&](const std::vector<Word>& cur, std::optional<Symbol> forced) {
        std::vector<Word> next;
        for (const auto& st : cur) {
            for (Symbol s = 0; s < alphabet; ++s) {
                if (forced && *forced != s) continue;
                Word w = st;
                w.push_back(s);
                if (has_forbidden_suffix(w)) continue;
                if (w.size() > k - 1 && k >= 1) w.erase(w.begin());
                push_unique(next, std::move(w));
            }
        }
        return next;
    };
    for (Symbol s : word) {
        frontier = advance(frontier, s);
        if (frontier.empty()) return false;
    }
    // breadth-first closure: bounded by the number of states, so a nonempty
    // stable frontier after that many free steps certifies a cycle
    double states = 1;
    for (size_t i = 0; i + 1 < k; ++i) {
        states *= alphabet;
        if (states > 4096) throw budget_error("SFT state space too large");
    }
    // k extra steps cover the short states before suffixes reach full length
    for (size_t step = 0; step <= static_cast<size_t>(states) + k; ++step) {
        frontier = advance(frontier, std::nullopt);
        if (frontier.empty()) return false;
    }
    return true;
}

}  // namespace detail

inline SystemSpec make_full_shift(uint32_t alphabet) {
    if (alphabet < 2) throw precondition_error("full shift needs alphabet >= 2");
    return SystemSpec(std::make_shared<const SystemKind>(SystemKind{FullShift{alphabet}}));
}

inline SystemSpec make_sft(uint32_t alphabet, std::vector<Word> forbidden) {
    if (alphabet < 2) throw precondition_error("SFT needs alphabet >= 2");
    for (const auto& w : forbidden) detail::check_word_alphabet(w, alphabet, "SFT");
    detail::check_sft_nonempty(alphabet, forbidden);
    return SystemSpec(
        std::make_shared<const SystemKind>(SystemKind{Sft{alphabet, std::move(forbidden)}}));
}

inline SystemSpec make_rotation(QuadraticNumber angle) {
    return SystemSpec(
        std::make_shared<const SystemKind>(SystemKind{CircleRotation{angle.mod1()}}));
}

inline SystemSpec make_odometer(uint32_t base) {
    if (base < 2) throw precondition_error("odometer needs base >= 2");
    return SystemSpec(std::make_shared<const SystemKind>(SystemKind{Odometer{base}}));
}

inline SystemSpec make_torus_automorphism(long long m00, long long m01, long long m10,
                                          long long m11) {
    TorusAutomorphism t{m00, m01, m10, m11};
    const long long det = t.det();
    if (det != 1 && det != -1)
        throw precondition_error("torus automorphism needs |det| = 1");
    if (t.trace() * t.trace() <= 4 * det)
        throw precondition_error("torus automorphism is not hyperbolic (trace^2 <= 4 det)");
    // det = -1 with zero trace has eigenvalues +-1 and slips past the
    // discriminant test
    if (det == -1 && t.trace() == 0)
        throw precondition_error("torus automorphism is not hyperbolic (eigenvalues on "
                                 "the unit circle)");
    return SystemSpec(std::make_shared<const SystemKind>(SystemKind{t}));
}

inline SystemSpec make_product(std::vector<SystemSpec> parts) {
    if (parts.empty()) throw precondition_error("product of zero systems");
    return SystemSpec(
        std::make_shared<const SystemKind>(SystemKind{ProductSystem{std::move(parts)}}));
}

Point step(const SystemSpec& spec, const Point& p);
bool point_equal(const Point& p, const Point& q);
void check_belongs(const SystemSpec& spec, const Point& p);

// Restriction to a finite forward-invariant point set; invariance verified by
// one step per point.
inline SystemSpec make_restriction(SystemSpec parent, std::vector<Point> points);

inline Point make_shift_point(SymbolicSequence seq, uint64_t offset = 0) {
    return Point(std::make_shared<const PointKind>(PointKind{ShiftPoint{std::move(seq), offset}}));
}
inline Point make_circle_point(QuadraticNumber x) {
    return Point(std::make_shared<const PointKind>(PointKind{CirclePoint{x.mod1()}}));
}
inline Point make_odometer_point(PrefixPeriodic digits) {
    return Point(std::make_shared<const PointKind>(PointKind{OdometerPoint{std::move(digits)}}));
}
inline Point make_torus_point(QuadraticNumber x, QuadraticNumber y) {
    return Point(std::make_shared<const PointKind>(PointKind{TorusPoint{x.mod1(), y.mod1()}}));
}
inline Point make_product_point(std::vector<Point> parts) {
    return Point(std::make_shared<const PointKind>(PointKind{ProductPoint{std::move(parts)}}));
}

inline OpenSetSpec make_cylinder(Word w) {
    if (w.empty()) throw precondition_error("empty cylinder word");
    return OpenSetSpec(std::make_shared<const OpenSetKind>(OpenSetKind{Cylinder{std::move(w)}}));
}
inline OpenSetSpec make_arc(QuadraticNumber center, Rational radius) {
    if (sgn(radius) <= 0) throw precondition_error("arc needs positive radius");
    return OpenSetSpec(
        std::make_shared<const OpenSetKind>(OpenSetKind{Arc{center.mod1(), std::move(radius)}}));
}
inline OpenSetSpec make_box(Arc x, Arc y) {
    return OpenSetSpec(
        std::make_shared<const OpenSetKind>(OpenSetKind{Box{std::move(x), std::move(y)}}));
}
inline OpenSetSpec make_digit_cylinder(Word digits) {
    if (digits.empty()) throw precondition_error("empty digit cylinder");
    return OpenSetSpec(
        std::make_shared<const OpenSetKind>(OpenSetKind{DigitCylinder{std::move(digits)}}));
}
inline OpenSetSpec make_point_cell(Point p) {
    return OpenSetSpec(std::make_shared<const OpenSetKind>(OpenSetKind{PointCell{std::move(p)}}));
}
inline OpenSetSpec make_product_open(std::vector<OpenSetSpec> parts) {
    if (parts.empty()) throw precondition_error("product of zero open sets");
    return OpenSetSpec(
        std::make_shared<const OpenSetKind>(OpenSetKind{ProductOpen{std::move(parts)}}));
}

inline SystemSpec::SystemSpec()
    : k_(std::make_shared<const SystemKind>(SystemKind{FullShift{2}})) {}
inline Point::Point()
    : k_(std::make_shared<const PointKind>(
          PointKind{ShiftPoint{SymbolicSequence::constant(2, 0), 0}})) {}

// ---------------------------------------------------------------------------
// Point equality (exact; defined for finitely decidable points)

inline bool point_equal(const Point& p, const Point& q) {
    const auto& pv = p.kind().v;
    const auto& qv = q.kind().v;
    if (pv.index() != qv.index()) return false;
    if (const auto* sp = std::get_if<ShiftPoint>(&pv)) {
        const auto& sq = std::get<ShiftPoint>(qv);
        if (sp->seq.is_prefix_periodic() && sq.seq.is_prefix_periodic())
            return same_sequence(sp->seq.prefix_periodic().drop(sp->offset),
                                 sq.seq.prefix_periodic().drop(sq.offset));
        // block programs: structural identity only
        return sp->offset == sq.offset && sp->seq == sq.seq;
    }
    if (const auto* cp = std::get_if<CirclePoint>(&pv))
        return cp->x == std::get<CirclePoint>(qv).x;
    if (const auto* op = std::get_if<OdometerPoint>(&pv))
        return same_sequence(op->digits, std::get<OdometerPoint>(qv).digits);
    if (const auto* tp = std::get_if<TorusPoint>(&pv)) {
        const auto& tq = std::get<TorusPoint>(qv);
        return tp->x == tq.x && tp->y == tq.y;
    }
    const auto& pp = std::get<ProductPoint>(pv);
    const auto& qq = std::get<ProductPoint>(qv);
    if (pp.parts.size() != qq.parts.size()) return false;
    for (size_t i = 0; i < pp.parts.size(); ++i)
        if (!point_equal(pp.parts[i], qq.parts[i])) return false;
    return true;
}

inline bool operator==(const SystemSpec& a, const SystemSpec& b) {
    const auto& av = a.kind().v;
    const auto& bv = b.kind().v;
    if (av.index() != bv.index()) return false;
    if (const auto* x = std::get_if<FullShift>(&av)) return *x == std::get<FullShift>(bv);
    if (const auto* x = std::get_if<Sft>(&av)) return *x == std::get<Sft>(bv);
    if (const auto* x = std::get_if<CircleRotation>(&av))
        return *x == std::get<CircleRotation>(bv);
    if (const auto* x = std::get_if<Odometer>(&av)) return *x == std::get<Odometer>(bv);
    if (const auto* x = std::get_if<TorusAutomorphism>(&av))
        return *x == std::get<TorusAutomorphism>(bv);
    if (const auto* x = std::get_if<ProductSystem>(&av)) {
        const auto& y = std::get<ProductSystem>(bv);
        if (x->parts.size() != y.parts.size()) return false;
        for (size_t i = 0; i < x->parts.size(); ++i)
            if (!(x->parts[i] == y.parts[i])) return false;
        return true;
    }
    const auto& x = std::get<Restriction>(av);
    const auto& y = std::get<Restriction>(bv);
    if (!(x.parent == y.parent) || x.points.size() != y.points.size()) return false;
    for (size_t i = 0; i < x.points.size(); ++i)
        if (!point_equal(x.points[i], y.points[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Membership of a point in a system's space

namespace detail {

inline const char* system_name(const SystemKind& k) {
    struct V {
        const char* operator()(const FullShift&) { return "full shift"; }
        const char* operator()(const Sft&) { return "SFT"; }
        const char* operator()(const CircleRotation&) { return "circle rotation"; }
        const char* operator()(const Odometer&) { return "odometer"; }
        const char* operator()(const TorusAutomorphism&) { return "torus automorphism"; }
        const char* operator()(const ProductSystem&) { return "product"; }
        const char* operator()(const Restriction&) { return "restriction"; }
    };
    return std::visit(V{}, k.v);
}

}  // namespace detail

inline void check_belongs(const SystemSpec& spec, const Point& p) {
    const auto& sv = spec.kind().v;
    const auto& pv = p.kind().v;
    auto mismatch = [&]() {
        throw kind_mismatch_error(std::string("point does not belong to ") +
                                  detail::system_name(spec.kind()));
    };
    if (const auto* fs = std::get_if<FullShift>(&sv)) {
        const auto* sp = std::get_if<ShiftPoint>(&pv);
        if (!sp || sp->seq.alphabet_size() != fs->alphabet) mismatch();
        return;
    }
    if (const auto* sft = std::get_if<Sft>(&sv)) {
        const auto* sp = std::get_if<ShiftPoint>(&pv);
        if (!sp || sp->seq.alphabet_size() != sft->alphabet) mismatch();
        return;
    }
    if (std::holds_alternative<CircleRotation>(sv)) {
        if (!std::holds_alternative<CirclePoint>(pv)) mismatch();
        return;
    }
    if (const auto* od = std::get_if<Odometer>(&sv)) {
        const auto* op = std::get_if<OdometerPoint>(&pv);
        if (!op) mismatch();
        for (Symbol d : op->digits.prefix)
            if (d >= od->base) mismatch();
        for (Symbol d : op->digits.period)
            if (d >= od->base) mismatch();
        return;
    }
    if (std::holds_alternative<TorusAutomorphism>(sv)) {
        if (!std::holds_alternative<TorusPoint>(pv)) mismatch();
        return;
    }
    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        const auto* pp = std::get_if<ProductPoint>(&pv);
        if (!pp || pp->parts.size() != pr->parts.size()) mismatch();
        for (size_t i = 0; i < pp->parts.size(); ++i)
            check_belongs(pr->parts[i], pp->parts[i]);
        return;
    }
    const auto& r = std::get<Restriction>(sv);
    for (const auto& q : r.points)
        if (point_equal(p, q)) return;
    throw kind_mismatch_error("point is not in the restriction's finite set");
}

// ---------------------------------------------------------------------------
// One-step dynamics

namespace detail {

// Successor of an eventually periodic digit stream under add-one-with-carry.
inline PrefixPeriodic odometer_add_one(const PrefixPeriodic& digits, uint32_t base) {
    const size_t np = digits.prefix.size(), nl = digits.period.size();
    const uint64_t scan = np + nl;
    std::optional<uint64_t> first_low;
    for (uint64_t i = 0; i < scan; ++i) {
        if (digits.at(i) < base - 1) {
            first_low = i;
            break;
        }
    }
    if (!first_low) return PrefixPeriodic::constant(0);  // ...(b-1) + 1 = ...0
    const uint64_t p = *first_low;
    const size_t new_prefix_len = std::max<uint64_t>(np, p + 1);
    Word prefix(new_prefix_len);
    for (uint64_t i = 0; i < new_prefix_len; ++i) {
        if (i < p)
            prefix[i] = 0;
        else if (i == p)
            prefix[i] = digits.at(i) + 1;
        else
            prefix[i] = digits.at(i);
    }
    Word period;
    if (new_prefix_len == np) {
        period = digits.period;
    } else {
        const uint64_t r = (new_prefix_len - np) % nl;
        period.assign(digits.period.begin() + static_cast<long>(r), digits.period.end());
        period.insert(period.end(), digits.period.begin(),
                      digits.period.begin() + static_cast<long>(r));
    }
    return PrefixPeriodic(std::move(prefix), std::move(period));
}

inline QuadraticNumber rotate_once(const QuadraticNumber& x, const QuadraticNumber& angle) {
    QuadraticNumber r = x + angle;
    if ((r - QuadraticNumber(Rational(1))).sign() >= 0) r -= QuadraticNumber(Rational(1));
    return r;
}

}  // namespace detail

inline Point step(const SystemSpec& spec, const Point& p) {
    check_belongs(spec, p);
    const auto& sv = spec.kind().v;
    const auto& pv = p.kind().v;
    if (std::holds_alternative<FullShift>(sv) || std::holds_alternative<Sft>(sv)) {
        const auto& sp = std::get<ShiftPoint>(pv);
        return make_shift_point(sp.seq, sp.offset + 1);
    }
    if (const auto* rot = std::get_if<CircleRotation>(&sv)) {
        const auto& cp = std::get<CirclePoint>(pv);
        return make_circle_point(detail::rotate_once(cp.x, rot->angle));
    }
    if (const auto* od = std::get_if<Odometer>(&sv)) {
        const auto& op = std::get<OdometerPoint>(pv);
        return make_odometer_point(detail::odometer_add_one(op.digits, od->base));
    }
    if (const auto* ta = std::get_if<TorusAutomorphism>(&sv)) {
        const auto& tp = std::get<TorusPoint>(pv);
        QuadraticNumber nx = rational_of(ta->m00) * tp.x + rational_of(ta->m01) * tp.y;
        QuadraticNumber ny = rational_of(ta->m10) * tp.x + rational_of(ta->m11) * tp.y;
        return make_torus_point(nx.mod1(), ny.mod1());
    }
    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        const auto& pp = std::get<ProductPoint>(pv);
        std::vector<Point> parts;
        parts.reserve(pp.parts.size());
        for (size_t i = 0; i < pp.parts.size(); ++i)
            parts.push_back(step(pr->parts[i], pp.parts[i]));
        return make_product_point(std::move(parts));
    }
    const auto& r = std::get<Restriction>(sv);
    return step(r.parent, p);
}

inline Point iterate(const SystemSpec& spec, Point p, uint64_t n) {
    for (uint64_t i = 0; i < n; ++i) p = step(spec, p);
    return p;
}

inline SystemSpec make_restriction(SystemSpec parent, std::vector<Point> points) {
    if (points.empty()) throw precondition_error("restriction to an empty set");
    for (const auto& p : points) {
        check_belongs(parent, p);
        const Point fp = step(parent, p);
        bool inside = false;
        for (const auto& q : points)
            if (point_equal(fp, q)) {
                inside = true;
                break;
            }
        if (!inside)
            throw precondition_error("restriction set is not forward-invariant");
    }
    return SystemSpec(std::make_shared<const SystemKind>(
        SystemKind{Restriction{std::move(parent), std::move(points)}}));
}

// ---------------------------------------------------------------------------
// Metrics

struct DistanceResult {
    QuadraticNumber value;
    // False only when a block-program comparison ran to the comparison bound
    // without finding a disagreement; the reported 0 then means "<= 2^-bound".
    bool certified = true;
};

namespace detail {

inline DistanceResult shift_distance(const ShiftPoint& p, const ShiftPoint& q,
                                     uint64_t bound) {
    if (p.seq.is_prefix_periodic() && q.seq.is_prefix_periodic()) {
        const PrefixPeriodic a = p.seq.prefix_periodic().drop(p.offset);
        const PrefixPeriodic b = q.seq.prefix_periodic().drop(q.offset);
        if (same_sequence(a, b)) return {QuadraticNumber(), true};
        const uint64_t l = std::lcm<uint64_t>(a.period.size(), b.period.size());
        const uint64_t exact_bound = std::max(a.prefix.size(), b.prefix.size()) + l;
        const auto k = first_disagreement(p.seq, p.offset, q.seq, q.offset, exact_bound);
        return {QuadraticNumber(pow2(-static_cast<long>(*k))), true};
    }
    const auto k = first_disagreement(p.seq, p.offset, q.seq, q.offset, bound);
    if (!k) return {QuadraticNumber(), false};
    return {QuadraticNumber(pow2(-static_cast<long>(*k))), true};
}

inline QuadraticNumber circle_distance(const QuadraticNumber& x, const QuadraticNumber& y) {
    // both in [0,1): d = min(|x - y|, 1 - |x - y|)
    QuadraticNumber t = (x - y).abs();
    const QuadraticNumber u = QuadraticNumber(Rational(1)) - t;
    return min(t, u);
}

inline DistanceResult odometer_distance(const OdometerPoint& p, const OdometerPoint& q) {
    if (same_sequence(p.digits, q.digits)) return {QuadraticNumber(), true};
    const uint64_t l = std::lcm<uint64_t>(p.digits.period.size(), q.digits.period.size());
    const uint64_t bound = std::max(p.digits.prefix.size(), q.digits.prefix.size()) + l;
    for (uint64_t k = 0; k < bound; ++k)
        if (p.digits.at(k) != q.digits.at(k))
            return {QuadraticNumber(pow2(-static_cast<long>(k))), true};
    return {QuadraticNumber(), true};  // unreachable
}

}  // namespace detail

inline DistanceResult distance_certified(const SystemSpec& spec, const Point& p,
                                         const Point& q,
                                         uint64_t bound = kComparisonBound) {
    check_belongs(spec, p);
    check_belongs(spec, q);
    const auto& sv = spec.kind().v;
    if (std::holds_alternative<FullShift>(sv) || std::holds_alternative<Sft>(sv)) {
        return detail::shift_distance(std::get<ShiftPoint>(p.kind().v),
                                      std::get<ShiftPoint>(q.kind().v), bound);
    }
    if (std::holds_alternative<CircleRotation>(sv)) {
        return {detail::circle_distance(std::get<CirclePoint>(p.kind().v).x,
                                        std::get<CirclePoint>(q.kind().v).x),
                true};
    }
    if (std::holds_alternative<Odometer>(sv)) {
        return detail::odometer_distance(std::get<OdometerPoint>(p.kind().v),
                                         std::get<OdometerPoint>(q.kind().v));
    }
    if (std::holds_alternative<TorusAutomorphism>(sv)) {
        const auto& a = std::get<TorusPoint>(p.kind().v);
        const auto& b = std::get<TorusPoint>(q.kind().v);
        return {max(detail::circle_distance(a.x, b.x), detail::circle_distance(a.y, b.y)),
                true};
    }
    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        const auto& a = std::get<ProductPoint>(p.kind().v);
        const auto& b = std::get<ProductPoint>(q.kind().v);
        DistanceResult out{QuadraticNumber(), true};
        for (size_t i = 0; i < pr->parts.size(); ++i) {
            DistanceResult d = distance_certified(pr->parts[i], a.parts[i], b.parts[i], bound);
            out.certified = out.certified && d.certified;
            out.value = max(out.value, d.value);
        }
        return out;
    }
    const auto& r = std::get<Restriction>(sv);
    return distance_certified(r.parent, p, q, bound);
}

inline QuadraticNumber distance(const SystemSpec& spec, const Point& p, const Point& q,
                                uint64_t bound = kComparisonBound) {
    return distance_certified(spec, p, q, bound).value;
}

// ---------------------------------------------------------------------------
// Finite bases of diameter <= 2^-resolution

inline constexpr size_t kBasisCap = size_t(1) << 20;

inline std::vector<OpenSetSpec> basis(const SystemSpec& spec, uint32_t resolution) {
    if (resolution < 1) throw precondition_error("basis resolution must be >= 1");
    const auto& sv = spec.kind().v;
    auto words_of_length = [&](uint32_t alphabet, uint32_t len,
                               auto&& keep) -> std::vector<Word> {
        double total = 1;
        for (uint32_t i = 0; i < len; ++i) {
            total *= alphabet;
            if (total > static_cast<double>(kBasisCap))
                throw budget_error("basis too large; lower the resolution");
        }
        std::vector<Word> out;
        Word cur;
        auto rec = [&](auto&& self, uint32_t depth) -> void {
            if (depth == len) {
                if (keep(cur)) out.push_back(cur);
                return;
            }
            for (Symbol s = 0; s < alphabet; ++s) {
                cur.push_back(s);
                self(self, depth + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    };
    std::vector<OpenSetSpec> cells;
    if (const auto* fs = std::get_if<FullShift>(&sv)) {
        for (auto& w : words_of_length(fs->alphabet, resolution, [](const Word&) { return true; }))
            cells.push_back(make_cylinder(std::move(w)));
        return cells;
    }
    if (const auto* sft = std::get_if<Sft>(&sv)) {
        auto nonempty = [&](const Word& w) {
            return detail::sft_cylinder_nonempty(sft->alphabet, sft->forbidden, w);
        };
        for (auto& w : words_of_length(sft->alphabet, resolution, nonempty))
            cells.push_back(make_cylinder(std::move(w)));
        return cells;
    }
    if (std::holds_alternative<CircleRotation>(sv)) {
        const uint64_t n = uint64_t(1) << resolution;
        if (n > kBasisCap) throw budget_error("basis too large; lower the resolution");
        const Rational radius = Rational(1) / Rational(Integer(2 * n));
        for (uint64_t k = 0; k < n; ++k) {
            Rational c{Integer(k), Integer(n)};
            c.canonicalize();
            cells.push_back(make_arc(QuadraticNumber(c), radius));
        }
        return cells;
    }
    if (const auto* od = std::get_if<Odometer>(&sv)) {
        for (auto& w : words_of_length(od->base, resolution, [](const Word&) { return true; }))
            cells.push_back(make_digit_cylinder(std::move(w)));
        return cells;
    }
    if (std::holds_alternative<TorusAutomorphism>(sv)) {
        const uint64_t n = uint64_t(1) << resolution;
        if (n * n > kBasisCap) throw budget_error("basis too large; lower the resolution");
        const Rational radius = Rational(1) / Rational(Integer(2 * n));
        for (uint64_t i = 0; i < n; ++i) {
            for (uint64_t j = 0; j < n; ++j) {
                Rational cx{Integer(i), Integer(n)};
                Rational cy{Integer(j), Integer(n)};
                cx.canonicalize();
                cy.canonicalize();
                cells.push_back(make_box(Arc{QuadraticNumber(cx), radius},
                                         Arc{QuadraticNumber(cy), radius}));
            }
        }
        return cells;
    }
    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        std::vector<std::vector<OpenSetSpec>> parts;
        size_t total = 1;
        for (const auto& part : pr->parts) {
            parts.push_back(basis(part, resolution));
            total *= parts.back().size();
            if (total > kBasisCap) throw budget_error("basis too large; lower the resolution");
        }
        std::vector<std::vector<OpenSetSpec>> acc{{}};
        for (const auto& options : parts) {
            std::vector<std::vector<OpenSetSpec>> next;
            for (const auto& partial : acc) {
                for (const auto& o : options) {
                    auto copy = partial;
                    copy.push_back(o);
                    next.push_back(std::move(copy));
                }
            }
            acc = std::move(next);
        }
        for (auto& tuple : acc) cells.push_back(make_product_open(std::move(tuple)));
        return cells;
    }
    const auto& r = std::get<Restriction>(sv);
    for (const auto& p : r.points) cells.push_back(make_point_cell(p));
    return cells;
}

// ---------------------------------------------------------------------------
// Exact membership of points in basis open sets

inline bool arc_contains(const Arc& arc, const QuadraticNumber& x) {
    // half-open [center - radius, center + radius)
    const QuadraticNumber start = arc.center - QuadraticNumber(arc.radius);
    const QuadraticNumber offset = (x - start).mod1();
    return (offset - QuadraticNumber(2 * arc.radius)).sign() < 0;
}

inline bool contains(const OpenSetSpec& open, const Point& p) {
    const auto& ov = open.kind().v;
    const auto& pv = p.kind().v;
    if (const auto* cyl = std::get_if<Cylinder>(&ov)) {
        const auto* sp = std::get_if<ShiftPoint>(&pv);
        if (!sp) throw kind_mismatch_error("cylinder membership needs a shift point");
        for (size_t i = 0; i < cyl->word.size(); ++i)
            if (sp->at(i) != cyl->word[i]) return false;
        return true;
    }
    if (const auto* arc = std::get_if<Arc>(&ov)) {
        const auto* cp = std::get_if<CirclePoint>(&pv);
        if (!cp) throw kind_mismatch_error("arc membership needs a circle point");
        return arc_contains(*arc, cp->x);
    }
    if (const auto* box = std::get_if<Box>(&ov)) {
        const auto* tp = std::get_if<TorusPoint>(&pv);
        if (!tp) throw kind_mismatch_error("box membership needs a torus point");
        return arc_contains(box->x, tp->x) && arc_contains(box->y, tp->y);
    }
    if (const auto* dc = std::get_if<DigitCylinder>(&ov)) {
        const auto* op = std::get_if<OdometerPoint>(&pv);
        if (!op) throw kind_mismatch_error("digit cylinder membership needs an odometer point");
        for (size_t i = 0; i < dc->digits.size(); ++i)
            if (op->digits.at(i) != dc->digits[i]) return false;
        return true;
    }
    if (const auto* cell = std::get_if<PointCell>(&ov)) return point_equal(cell->p, p);
    const auto& po = std::get<ProductOpen>(ov);
    const auto* pp = std::get_if<ProductPoint>(&pv);
    if (!pp || pp->parts.size() != po.parts.size())
        throw kind_mismatch_error("product open membership needs a matching product point");
    for (size_t i = 0; i < po.parts.size(); ++i)
        if (!contains(po.parts[i], pp->parts[i])) return false;
    return true;
}

}  // namespace dc1lab::systems
