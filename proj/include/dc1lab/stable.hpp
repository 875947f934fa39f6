#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dc1lab/system.hpp"

namespace dc1lab::stable {

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
using systems::PrefixPeriodic;
using systems::QuadraticNumber;
using systems::ShiftPoint;
using systems::SymbolicSequence;
using systems::SystemSpec;
using systems::TorusAutomorphism;
using systems::TorusPoint;
using systems::Word;

// ---------------------------------------------------------------------------
// Stable direction of a hyperbolic integer matrix, exact in Q(sqrt5)

struct StableDirection {
    QuadraticNumber eigenvalue;  // |lambda| < 1
    QuadraticNumber vx, vy;      // eigenvector, first coordinate normalized when possible
};

inline StableDirection stable_direction(const TorusAutomorphism& m) {
    const long long tr = m.trace();
    const long long det = m.det();
    const long long disc = tr * tr - 4 * det;
    if (disc <= 0) throw precondition_error("matrix is not hyperbolic");
    // sqrt(disc) must live in the coordinate field: disc = s^2 or disc = 5 s^2
    QuadraticNumber root;
    {
        long long s = 0;
        while (s * s < disc) ++s;
        if (s * s == disc) {
            root = QuadraticNumber(rational_of(s));
        } else {
            if (disc % 5 != 0)
                throw precondition_error("eigenvalues are outside Q(sqrt5)");
            const long long q = disc / 5;
            long long r = 0;
            while (r * r < q) ++r;
            if (r * r != q)
                throw precondition_error("eigenvalues are outside Q(sqrt5)");
            root = QuadraticNumber(Rational(0), rational_of(r));
        }
    }
    const QuadraticNumber half(Rational(1, 2));
    const QuadraticNumber l1 = half * (QuadraticNumber(rational_of(tr)) + root);
    const QuadraticNumber l2 = half * (QuadraticNumber(rational_of(tr)) - root);
    auto abs_below_one = [](const QuadraticNumber& l) {
        const QuadraticNumber a = l.abs();
        return (a - QuadraticNumber(Rational(1))).sign() < 0;
    };
    QuadraticNumber lam;
    if (abs_below_one(l1))
        lam = l1;
    else if (abs_below_one(l2))
        lam = l2;
    else
        throw precondition_error("matrix has no contracting eigenvalue");

    StableDirection dir;
    dir.eigenvalue = lam;
    if (m.m01 != 0) {
        // (m00 - lam) x + m01 y = 0 with x = 1
        dir.vx = QuadraticNumber(Rational(1));
        dir.vy = (lam - QuadraticNumber(rational_of(m.m00))) *
                 QuadraticNumber(Rational(1, static_cast<long>(m.m01)));
    } else if (m.m10 != 0) {
        dir.vx = (lam - QuadraticNumber(rational_of(m.m11))) *
                 QuadraticNumber(Rational(1, static_cast<long>(m.m10)));
        dir.vy = QuadraticNumber(Rational(1));
    } else {
        throw precondition_error("diagonal matrices are not hyperbolic with |det| = 1");
    }
    return dir;
}

struct StableLinePoint {
    Point point;
    uint64_t anchor_period = 1;
    StableDirection direction;
};

inline constexpr uint64_t kPeriodCap = 4096;

// anchor + t * v_s mod 1 for a periodic anchor; the orbit distance to the
// anchor's orbit contracts by the stable eigenvalue per period while the
// unwrapped displacement stays below the wrap scale.
inline StableLinePoint stable_line_point(const TorusAutomorphism& m, const Point& anchor,
                                         const Rational& t,
                                         uint64_t period_cap = kPeriodCap) {
    const SystemSpec spec = systems::make_torus_automorphism(m.m00, m.m01, m.m10, m.m11);
    systems::check_belongs(spec, anchor);
    uint64_t period = 0;
    Point cur = anchor;
    for (uint64_t i = 1; i <= period_cap; ++i) {
        cur = systems::step(spec, cur);
        if (systems::point_equal(cur, anchor)) {
            period = i;
            break;
        }
    }
    if (period == 0)
        throw precondition_error("anchor is not periodic within the period cap");
    StableLinePoint out;
    out.anchor_period = period;
    out.direction = stable_direction(m);
    const auto& ap = std::get<TorusPoint>(anchor.kind().v);
    out.point = systems::make_torus_point(
        (ap.x + QuadraticNumber(t) * out.direction.vx).mod1(),
        (ap.y + QuadraticNumber(t) * out.direction.vy).mod1());
    return out;
}

// ---------------------------------------------------------------------------
// eps-stable membership evidence

struct StableEvidence {
    enum class Verdict { InCertified, InEvidence, OutCertified, Unknown };
    Verdict verdict = Verdict::Unknown;
    QuadraticNumber tail_sup;  // sup of orbit distances over the window
    uint64_t window_start = 0;
    uint64_t window_end = 0;
    std::optional<QuadraticNumber> true_limsup;  // when certified
    std::string note;

    bool in() const {
        return verdict == Verdict::InCertified || verdict == Verdict::InEvidence;
    }
};

inline const char* to_string(StableEvidence::Verdict v) {
    switch (v) {
        case StableEvidence::Verdict::InCertified: return "IN-certified";
        case StableEvidence::Verdict::InEvidence: return "IN-evidence";
        case StableEvidence::Verdict::OutCertified: return "OUT-certified";
        default: return "UNKNOWN";
    }
}

namespace detail {

// exact limsup of orbit distances for a pair of eventually periodic shift
// points: distances repeat once both sequences are inside their periodic
// tails, so the max over one joint cycle is the true limsup
inline QuadraticNumber pp_pair_limsup(const SystemSpec& spec, const ShiftPoint& x,
                                      const ShiftPoint& y) {
    const auto& gx = x.seq.prefix_periodic();
    const auto& gy = y.seq.prefix_periodic();
    const uint64_t pre =
        std::max(gx.prefix.size() + x.offset, gy.prefix.size() + y.offset);
    const uint64_t l = std::lcm<uint64_t>(gx.period.size(), gy.period.size());
    if (l > (uint64_t(1) << 22)) throw budget_error("period lcm too large");
    QuadraticNumber best;
    for (uint64_t i = pre; i < pre + l; ++i) {
        const Point a = systems::make_shift_point(x.seq, x.offset + i);
        const Point b = systems::make_shift_point(y.seq, y.offset + i);
        const QuadraticNumber d = systems::distance(spec, a, b);
        if (d > best) best = d;
    }
    return best;
}

// does y - x lie on the stable line t * v with a small unwrapped parameter?
inline std::optional<QuadraticNumber> small_stable_parameter(
    const TorusAutomorphism& m, const TorusPoint& x, const TorusPoint& y) {
    const StableDirection dir = stable_direction(m);
    if (dir.vx.is_zero()) return std::nullopt;
    const QuadraticNumber dx = y.x - x.x;
    const QuadraticNumber dy = y.y - x.y;
    for (long k1 = -2; k1 <= 2; ++k1) {
        const QuadraticNumber t = (dx + QuadraticNumber(Rational(k1))) / dir.vx;
        const QuadraticNumber w = t * dir.vy - dy;
        // w must be an integer for y - x = t v (mod Z^2)
        if ((w - QuadraticNumber(Rational(w.floor()))).is_zero()) return t;
    }
    return std::nullopt;
}

}  // namespace detail

inline StableEvidence stable_membership(const SystemSpec& spec, const Point& x,
                                        const Point& y, const QuadraticNumber& eps,
                                        uint64_t tail_start, uint64_t horizon) {
    if (tail_start >= horizon)
        throw precondition_error("tail_start must be below the horizon");
    if (eps.sign() < 0) throw precondition_error("eps must be nonnegative");
    systems::check_belongs(spec, x);
    systems::check_belongs(spec, y);

    StableEvidence ev;
    ev.window_start = tail_start;
    ev.window_end = horizon;

    const auto& sv = spec.kind().v;

    // certificates where the tail is decidable
    if (std::holds_alternative<CircleRotation>(sv) || std::holds_alternative<Odometer>(sv)) {
        const QuadraticNumber d = systems::distance(spec, x, y);
        ev.tail_sup = d;
        ev.true_limsup = d;
        const bool in = (d - eps).sign() <= 0;
        ev.verdict = in ? StableEvidence::Verdict::InCertified
                        : StableEvidence::Verdict::OutCertified;
        ev.note = "isometry: orbit distance is constant";
        return ev;
    }
    if (std::holds_alternative<FullShift>(sv) || std::holds_alternative<systems::Sft>(sv)) {
        const auto& sx = std::get<ShiftPoint>(x.kind().v);
        const auto& sy = std::get<ShiftPoint>(y.kind().v);
        if (sx.seq.is_prefix_periodic() && sy.seq.is_prefix_periodic()) {
            const QuadraticNumber sup = detail::pp_pair_limsup(spec, sx, sy);
            ev.true_limsup = sup;
            ev.tail_sup = sup;
            const bool in = (sup - eps).sign() <= 0;
            ev.verdict = in ? StableEvidence::Verdict::InCertified
                            : StableEvidence::Verdict::OutCertified;
            ev.note = in ? "eventually periodic pair; exact limsup of the tail"
                         : "eventually periodic pair; the distance exceeds eps at "
                           "infinitely many indices of the recurring cycle";
            return ev;
        }
    }
    if (const auto* ta = std::get_if<TorusAutomorphism>(&sv)) {
        const auto& tx = std::get<TorusPoint>(x.kind().v);
        const auto& ty = std::get<TorusPoint>(y.kind().v);
        const auto t = detail::small_stable_parameter(*ta, tx, ty);
        if (t) {
            ev.true_limsup = QuadraticNumber();
            ev.verdict = StableEvidence::Verdict::InCertified;
            ev.note = "difference lies on the stable line (parameter " + t->str() +
                      "); the orbit distance contracts to 0";
            // still report the window sup below for the record
        }
    }

    // window evidence
    Point cx = x, cy = y;
    for (uint64_t i = 0; i < tail_start; ++i) {
        cx = systems::step(spec, cx);
        cy = systems::step(spec, cy);
    }
    QuadraticNumber sup;
    bool truncated = false;
    for (uint64_t i = tail_start; i < horizon; ++i) {
        const systems::DistanceResult d = systems::distance_certified(spec, cx, cy);
        truncated = truncated || !d.certified;
        if (d.value > sup) sup = d.value;
        cx = systems::step(spec, cx);
        cy = systems::step(spec, cy);
    }
    ev.tail_sup = sup;
    if (ev.verdict == StableEvidence::Verdict::InCertified) return ev;
    if ((sup - eps).sign() <= 0 && !truncated) {
        ev.verdict = StableEvidence::Verdict::InEvidence;
        ev.note = "window sup within eps; no tail certificate";
    } else {
        ev.verdict = StableEvidence::Verdict::Unknown;
        ev.note = truncated ? "window sup carries an unresolved comparison bound"
                            : "window sup exceeds eps; no certificate either way";
    }
    return ev;
}

// ---------------------------------------------------------------------------
// Coverage of the space by eps-stable sets of a sample set

struct CellWitness {
    size_t cell = 0;
    bool covered = false;
    std::optional<Point> witness;
    size_t target_index = 0;  // index into the sample
    StableEvidence evidence;
};

struct CoverReport {
    std::vector<OpenSetSpec> cells;
    std::vector<CellWitness> table;
    Rational coverage = 0;  // covered cells / cells
    std::string note;
};

namespace detail {

// rational strictly inside a nonempty open interval (lo, hi)
inline Rational rational_inside(const QuadraticNumber& lo, const QuadraticNumber& hi) {
    const QuadraticNumber width = hi - lo;
    long s = 0;
    while ((QuadraticNumber(pow2(-s)) - width).sign() >= 0) {
        ++s;
        if (s > 4096) throw budget_error("interval too thin to rationalize");
    }
    const Rational step = pow2(-s);
    const QuadraticNumber scaled = lo * QuadraticNumber(step.get_den());
    Rational r{scaled.floor() + 1, step.get_den()};
    r.canonicalize();
    return r;
}

// witness for a shift cylinder: the cell word followed by the target's tail
inline Point shift_cover_witness(uint32_t alphabet, const Word& cell,
                                 const ShiftPoint& target) {
    const PrefixPeriodic tail = target.seq.prefix_periodic().drop(target.offset + cell.size());
    Word prefix = cell;
    prefix.insert(prefix.end(), tail.prefix.begin(), tail.prefix.end());
    return systems::make_shift_point(
        SymbolicSequence(alphabet, PrefixPeriodic(std::move(prefix), tail.period)));
}

// smallest-|t| stable-line parameter interval meeting the box, searched over
// windings; returns a rational parameter strictly inside
inline std::optional<Rational> stable_line_into_box(const StableDirection& dir,
                                                    const TorusPoint& anchor,
                                                    const Box& box, long winding_cap) {
    // first coordinate: anchor.x + t in [bx, bx + wx) mod 1  (vx normalized to 1)
    if (!(dir.vx == QuadraticNumber(Rational(1))))
        return std::nullopt;
    const QuadraticNumber beta = dir.vy;
    const QuadraticNumber bx = box.x.center - QuadraticNumber(box.x.radius);
    const QuadraticNumber by = box.y.center - QuadraticNumber(box.y.radius);
    const Rational wx = 2 * box.x.radius;
    const Rational wy = 2 * box.y.radius;
    const QuadraticNumber t0 = bx - anchor.x;

    for (long step = 0; step <= winding_cap; ++step) {
        for (int sign_pick = 0; sign_pick < (step == 0 ? 1 : 2); ++sign_pick) {
            const long mm = sign_pick == 0 ? step : -step;
            const QuadraticNumber a = t0 + QuadraticNumber(Rational(mm));
            const QuadraticNumber b = a + QuadraticNumber(wx);
            // second coordinate: anchor.y + beta t in [by + k, by + wy + k)
            const QuadraticNumber ylo =
                anchor.y + min(beta * a, beta * b);
            const QuadraticNumber yhi =
                anchor.y + max(beta * a, beta * b);
            Integer k = (ylo - by - QuadraticNumber(wy)).floor() - 1;
            const Integer k_end = (yhi - by).floor() + 1;
            for (; k <= k_end; ++k) {
                const QuadraticNumber c1 = by + QuadraticNumber(Rational(k)) - anchor.y;
                const QuadraticNumber c2 = c1 + QuadraticNumber(wy);
                // beta t in [c1, c2): as an open t-interval
                QuadraticNumber tlo, thi;
                if (beta.sign() > 0) {
                    tlo = c1 / beta;
                    thi = c2 / beta;
                } else {
                    tlo = c2 / beta;
                    thi = c1 / beta;
                }
                QuadraticNumber lo = max(a, tlo);
                QuadraticNumber hi = min(b, thi);
                if ((hi - lo).sign() > 0) {
                    const Rational t = rational_inside(lo, hi);
                    // exact verification of both box coordinates
                    const QuadraticNumber px = (anchor.x + QuadraticNumber(t)).mod1();
                    const QuadraticNumber py = (anchor.y + beta * QuadraticNumber(t)).mod1();
                    if (systems::arc_contains(box.x, px) && systems::arc_contains(box.y, py))
                        return t;
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline CoverReport stable_cover_report(const SystemSpec& spec,
                                       const std::vector<Point>& sample,
                                       const QuadraticNumber& eps, uint32_t resolution,
                                       uint64_t tail_start, uint64_t horizon,
                                       long winding_cap = 512) {
    if (sample.empty()) throw precondition_error("empty sample set");
    for (const auto& p : sample) systems::check_belongs(spec, p);
    CoverReport rep;
    rep.cells = systems::basis(spec, resolution);
    const auto& sv = spec.kind().v;

    size_t covered = 0;
    for (size_t c = 0; c < rep.cells.size(); ++c) {
        CellWitness cw;
        cw.cell = c;
        if (const auto* fs = std::get_if<FullShift>(&sv)) {
            const auto& cell = std::get<Cylinder>(rep.cells[c].kind().v);
            for (size_t s = 0; s < sample.size(); ++s) {
                const auto& sp = std::get<ShiftPoint>(sample[s].kind().v);
                if (!sp.seq.is_prefix_periodic()) continue;
                const Point w = detail::shift_cover_witness(fs->alphabet, cell.word, sp);
                const StableEvidence ev =
                    stable_membership(spec, sample[s], w, eps, tail_start, horizon);
                if (ev.in()) {
                    cw.covered = true;
                    cw.witness = w;
                    cw.target_index = s;
                    cw.evidence = ev;
                    break;
                }
            }
        } else if (std::holds_alternative<CircleRotation>(sv)) {
            const auto& arc = std::get<Arc>(rep.cells[c].kind().v);
            const QuadraticNumber start = arc.center - QuadraticNumber(arc.radius);
            const Rational len = 2 * arc.radius;
            for (size_t s = 0; s < sample.size(); ++s) {
                const QuadraticNumber x = std::get<CirclePoint>(sample[s].kind().v).x;
                // distance from x to the half-open arc, with an attained witness
                std::optional<QuadraticNumber> wpt;
                const QuadraticNumber g = (x - start).mod1();
                if ((g - QuadraticNumber(len)).sign() < 0) {
                    wpt = x;  // x itself lies in the cell
                } else {
                    const QuadraticNumber to_left = QuadraticNumber(Rational(1)) - g;
                    if ((to_left - eps).sign() <= 0) {
                        wpt = start;  // left endpoint is in the cell
                    } else {
                        const QuadraticNumber beyond = g - QuadraticNumber(len);
                        if ((beyond - eps).sign() < 0) {
                            // back off from the open right end just enough
                            QuadraticNumber mu = Rational(1, 2) * (eps - beyond);
                            if ((mu - QuadraticNumber(len)).sign() >= 0)
                                mu = Rational(1, 2) * QuadraticNumber(len);
                            wpt = (start + QuadraticNumber(len) - mu).mod1();
                        }
                    }
                }
                if (wpt) {
                    const Point w = systems::make_circle_point(*wpt);
                    const StableEvidence ev =
                        stable_membership(spec, sample[s], w, eps, tail_start, horizon);
                    if (ev.in()) {
                        cw.covered = true;
                        cw.witness = w;
                        cw.target_index = s;
                        cw.evidence = ev;
                        break;
                    }
                }
            }
        } else if (const auto* ta = std::get_if<TorusAutomorphism>(&sv)) {
            const auto& box = std::get<Box>(rep.cells[c].kind().v);
            const StableDirection dir = stable_direction(*ta);
            for (size_t s = 0; s < sample.size(); ++s) {
                const auto& ap = std::get<TorusPoint>(sample[s].kind().v);
                const auto t = detail::stable_line_into_box(dir, ap, box, winding_cap);
                if (t) {
                    const Point w = systems::make_torus_point(
                        (ap.x + QuadraticNumber(*t)).mod1(),
                        (ap.y + dir.vy * QuadraticNumber(*t)).mod1());
                    StableEvidence ev;
                    ev.verdict = StableEvidence::Verdict::InCertified;
                    ev.true_limsup = QuadraticNumber();
                    ev.window_start = tail_start;
                    ev.window_end = horizon;
                    ev.note = "stable-line witness with parameter t = " + t->get_str() +
                              "; orbit distance contracts to 0";
                    cw.covered = true;
                    cw.witness = w;
                    cw.target_index = s;
                    cw.evidence = ev;
                    break;
                }
            }
        } else if (std::holds_alternative<Odometer>(sv)) {
            const auto& cell = std::get<DigitCylinder>(rep.cells[c].kind().v);
            for (size_t s = 0; s < sample.size(); ++s) {
                const auto& op = std::get<OdometerPoint>(sample[s].kind().v);
                // the best cell point copies the target beyond the cell digits
                const PrefixPeriodic tail = op.digits.drop(cell.digits.size());
                Word prefix = cell.digits;
                prefix.insert(prefix.end(), tail.prefix.begin(), tail.prefix.end());
                const Point w = systems::make_odometer_point(
                    PrefixPeriodic(std::move(prefix), tail.period));
                const StableEvidence ev =
                    stable_membership(spec, sample[s], w, eps, tail_start, horizon);
                if (ev.in()) {
                    cw.covered = true;
                    cw.witness = w;
                    cw.target_index = s;
                    cw.evidence = ev;
                    break;
                }
            }
        } else {
            throw precondition_error("stable cover supports full shifts, rotations, "
                                     "torus automorphisms and odometers");
        }
        covered += cw.covered;
        rep.table.push_back(std::move(cw));
    }
    Rational cov{Integer(covered), Integer(rep.cells.size())};
    cov.canonicalize();
    rep.coverage = cov;
    rep.note = "uncovered cells are reported, never raised";
    return rep;
}

}  // namespace dc1lab::stable
