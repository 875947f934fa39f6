#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dc1lab/system.hpp"

namespace dc1lab::systems {

enum class Verdict { Certified, Refuted, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "CERTIFIED";
        case Verdict::Refuted: return "REFUTED";
        default: return "UNKNOWN";
    }
}

// Modulus of equicontinuity, when one is known.
//   Analytic:          delta(eps) = eps            (isometries, odometers)
//   FiniteSeparation:  delta(eps) = min(eps, s/2)  (finite invariant sets,
//                      s = min pairwise distance; points closer than s/2
//                      coincide, so all iterates stay at distance 0)
struct EquicontinuityModulus {
    enum class Kind { Analytic, FiniteSeparation, Refuted, Unknown };
    Kind kind = Kind::Unknown;
    QuadraticNumber separation;  // FiniteSeparation only
    std::string note;
    std::optional<std::pair<Point, Point>> counterexample;
    uint64_t counterexample_time = 0;

    QuadraticNumber delta_for(const QuadraticNumber& eps) const {
        switch (kind) {
            case Kind::Analytic: return eps;
            case Kind::FiniteSeparation:
                return min(eps, Rational(1, 2) * separation);
            default:
                throw precondition_error("no equicontinuity modulus available");
        }
    }
};

struct MinimalityReport {
    Verdict minimal = Verdict::Unknown;
    std::string minimal_note;
    std::optional<uint64_t> period;        // certified single periodic orbit
    std::optional<Rational> orbit_density_evidence;  // fraction of cells visited
    Verdict equicontinuous = Verdict::Unknown;
    EquicontinuityModulus modulus;
};

namespace detail {

inline Rational orbit_cell_fraction(const SystemSpec& spec, const Point& start,
                                    uint64_t horizon, uint32_t resolution) {
    const auto cells = basis(spec, resolution);
    std::vector<bool> hit(cells.size(), false);
    Point p = start;
    size_t found = 0;
    for (uint64_t i = 0; i < horizon && found < cells.size(); ++i) {
        for (size_t c = 0; c < cells.size(); ++c) {
            if (!hit[c] && contains(cells[c], p)) {
                hit[c] = true;
                ++found;
            }
        }
        p = step(spec, p);
    }
    Rational f(Integer(found), Integer(cells.size()));
    f.canonicalize();
    return f;
}

inline uint32_t evidence_resolution(uint64_t horizon, uint32_t cells_per_unit) {
    uint32_t r = 1;
    uint64_t cells = cells_per_unit;
    while (r < 6 && cells * cells_per_unit <= horizon / 4) {
        ++r;
        cells *= cells_per_unit;
    }
    return r;
}

}  // namespace detail

// Verdict-based minimality and equicontinuity check for the subsystem given
// by `lambda_spec` (a Restriction for finite sets; a rotation/odometer/shift
// spec for whole spaces).
inline MinimalityReport check_minimal_equicontinuous(const SystemSpec& lambda_spec,
                                                     uint64_t horizon) {
    MinimalityReport rep;
    const auto& sv = lambda_spec.kind().v;

    if (const auto* r = std::get_if<Restriction>(&sv)) {
        // Minimal <=> the set is a single periodic orbit.
        const size_t n = r->points.size();
        std::vector<bool> seen(n, false);
        Point p = r->points[0];
        uint64_t len = 0;
        while (true) {
            size_t idx = n;
            for (size_t i = 0; i < n; ++i)
                if (point_equal(p, r->points[i])) {
                    idx = i;
                    break;
                }
            if (idx == n)
                throw precondition_error("restriction point escaped the set");
            if (seen[idx]) break;
            seen[idx] = true;
            ++len;
            p = step(r->parent, p);
        }
        const bool all = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
        const bool closes = point_equal(p, r->points[0]);
        if (all && closes) {
            rep.minimal = Verdict::Certified;
            rep.period = len;
            rep.minimal_note = "single periodic orbit of period " + std::to_string(len);
        } else {
            rep.minimal = Verdict::Refuted;
            rep.minimal_note =
                "orbit of the first point visits " + std::to_string(len) + " of " +
                std::to_string(n) + " points; a proper closed invariant subset exists";
        }
        // modulus from the finite separation
        if (n == 1) {
            rep.modulus.kind = EquicontinuityModulus::Kind::FiniteSeparation;
            rep.modulus.separation = QuadraticNumber(Rational(1));
            rep.modulus.note = "singleton set";
        } else {
            QuadraticNumber s;
            bool first = true;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = i + 1; j < n; ++j) {
                    const QuadraticNumber d =
                        distance(r->parent, r->points[i], r->points[j]);
                    if (first || d < s) {
                        s = d;
                        first = false;
                    }
                }
            rep.modulus.kind = EquicontinuityModulus::Kind::FiniteSeparation;
            rep.modulus.separation = s;
            rep.modulus.note = "delta(eps) = min(eps, s/2), s = minimal pairwise distance";
        }
        rep.equicontinuous = Verdict::Certified;
        return rep;
    }

    if (const auto* rot = std::get_if<CircleRotation>(&sv)) {
        rep.equicontinuous = Verdict::Certified;
        rep.modulus.kind = EquicontinuityModulus::Kind::Analytic;
        rep.modulus.note = "rotation is an isometry; delta(eps) = eps";
        if (rot->angle.is_rational()) {
            rep.minimal = Verdict::Refuted;
            rep.minimal_note =
                "rational angle: the orbit of 0 is a finite proper closed invariant subset";
        } else {
            rep.minimal = Verdict::Unknown;
            const uint32_t res = detail::evidence_resolution(horizon, 2);
            rep.orbit_density_evidence = detail::orbit_cell_fraction(
                lambda_spec, make_circle_point(QuadraticNumber()), horizon, res);
            rep.minimal_note = "dense-orbit evidence at horizon (fraction of 2^" +
                               std::to_string(res) + " arcs visited)";
        }
        return rep;
    }

    if (const auto* od = std::get_if<Odometer>(&sv)) {
        rep.equicontinuous = Verdict::Certified;
        rep.modulus.kind = EquicontinuityModulus::Kind::Analytic;
        rep.modulus.note = "adding one preserves the digit metric; delta(eps) = eps";
        rep.minimal = Verdict::Unknown;
        const uint32_t res = detail::evidence_resolution(horizon, od->base);
        rep.orbit_density_evidence = detail::orbit_cell_fraction(
            lambda_spec, make_odometer_point(PrefixPeriodic::constant(0)), horizon, res);
        rep.minimal_note = "dense-orbit evidence at horizon (digit cylinders of length " +
                           std::to_string(res) + ")";
        return rep;
    }

    if (const auto* fs = std::get_if<FullShift>(&sv)) {
        rep.minimal = Verdict::Refuted;
        rep.minimal_note = "the fixed point of constant symbol 0 spans a proper "
                           "closed invariant subset";
        rep.equicontinuous = Verdict::Refuted;
        const uint64_t m = 16;
        Word pre(m, 0);
        pre.push_back(1);
        rep.modulus.kind = EquicontinuityModulus::Kind::Refuted;
        rep.modulus.counterexample = {
            make_shift_point(SymbolicSequence::constant(fs->alphabet, 0)),
            make_shift_point(SymbolicSequence(fs->alphabet, PrefixPeriodic(pre, {0})))};
        rep.modulus.counterexample_time = m;
        rep.modulus.note = "points at distance 2^-16 separate to distance 1 at time 16";
        return rep;
    }

    if (std::holds_alternative<TorusAutomorphism>(sv)) {
        rep.minimal = Verdict::Refuted;
        rep.minimal_note = "(0,0) is a fixed point; its orbit is a proper closed "
                           "invariant subset";
        // hyperbolicity: points off the stable line separate
        const Point a = make_torus_point(QuadraticNumber(), QuadraticNumber());
        const Point b = make_torus_point(QuadraticNumber(Rational(1, 1024)), QuadraticNumber());
        Point q = b;
        for (uint64_t i = 0; i < horizon; ++i) {
            if ((distance(lambda_spec, a, q) - QuadraticNumber(Rational(1, 4))).sign() >= 0) {
                rep.equicontinuous = Verdict::Refuted;
                rep.modulus.kind = EquicontinuityModulus::Kind::Refuted;
                rep.modulus.counterexample = {a, b};
                rep.modulus.counterexample_time = i;
                rep.modulus.note = "nearby points separate to distance >= 1/4";
                break;
            }
            q = step(lambda_spec, q);
        }
        if (rep.equicontinuous != Verdict::Refuted) {
            rep.equicontinuous = Verdict::Unknown;
            rep.modulus.note = "no separation found below horizon";
        }
        return rep;
    }

    if (const auto* pr = std::get_if<ProductSystem>(&sv)) {
        rep.minimal = Verdict::Unknown;
        rep.minimal_note = "minimality of products is not decided here";
        Verdict eq = Verdict::Certified;
        bool analytic = true;
        QuadraticNumber sep;
        bool have_sep = false;
        for (const auto& part : pr->parts) {
            const MinimalityReport sub = check_minimal_equicontinuous(part, horizon);
            if (sub.equicontinuous == Verdict::Refuted) {
                eq = Verdict::Refuted;
                rep.modulus = sub.modulus;
                break;
            }
            if (sub.equicontinuous == Verdict::Unknown) eq = Verdict::Unknown;
            if (sub.modulus.kind == EquicontinuityModulus::Kind::FiniteSeparation) {
                analytic = false;
                if (!have_sep || sub.modulus.separation < sep) sep = sub.modulus.separation;
                have_sep = true;
            }
        }
        rep.equicontinuous = eq;
        if (eq == Verdict::Certified) {
            if (analytic) {
                rep.modulus.kind = EquicontinuityModulus::Kind::Analytic;
                rep.modulus.note = "max metric of analytic factors";
            } else {
                rep.modulus.kind = EquicontinuityModulus::Kind::FiniteSeparation;
                rep.modulus.separation = sep;
                rep.modulus.note = "max metric; smallest factor separation";
            }
        }
        return rep;
    }

    // SFT
    rep.minimal = Verdict::Unknown;
    rep.minimal_note = "SFT minimality is not decided at finite horizon";
    rep.equicontinuous = Verdict::Unknown;
    rep.modulus.note = "no modulus derived for SFTs";
    return rep;
}

// Convenience overload: finite point set inside a parent system.
inline MinimalityReport check_minimal_equicontinuous(const SystemSpec& parent,
                                                     std::vector<Point> lambda,
                                                     uint64_t horizon) {
    return check_minimal_equicontinuous(make_restriction(parent, std::move(lambda)), horizon);
}

}  // namespace dc1lab::systems
