#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dc1lab/errors.hpp"
#include "dc1lab/quadratic.hpp"

namespace dc1lab::furstenberg::detail {

using systems::QuadraticNumber;

// Exact test whether A * U meets V modulo 1, where A is an integer matrix
// (a power of the automorphism), and U, V are half-open boxes
//   U = u0 + [0,wux) x [0,wuy),   V = v0 + [0,wvx) x [0,wvy).
// Writing points of U as u0 + (s,t), the image is A u0 + s a + t b with
// integer columns a, b. The test walks the integer translates k of V that
// can meet the image parallelogram, and decides each candidate with exact
// polygon clipping over Q(sqrt5) (half-open sides handled symbolically).
// Work grows with the matrix norm (the image crosses that many lattice
// cells), so callers pass a cell budget; exhausting it throws budget_error.

struct TorusBoxHit {
    bool hit = false;
    // witness (s, t) inside U's parameter box when hit
    QuadraticNumber s, t;
};

namespace poly {

struct Pt {
    QuadraticNumber x, y;
};

// Clip a convex polygon by the closed half-plane cx*x + cy*y <= rhs.
inline std::vector<Pt> clip(const std::vector<Pt>& in, const Rational& cx,
                            const Rational& cy, const QuadraticNumber& rhs) {
    std::vector<Pt> out;
    const size_t n = in.size();
    auto value = [&](const Pt& p) { return cx * p.x + cy * p.y; };
    for (size_t i = 0; i < n; ++i) {
        const Pt& cur = in[i];
        const Pt& nxt = in[(i + 1) % n];
        const QuadraticNumber vc = value(cur) - rhs;
        const QuadraticNumber vn = value(nxt) - rhs;
        const int sc = vc.sign(), sn = vn.sign();
        if (sc <= 0) out.push_back(cur);
        if ((sc < 0 && sn > 0) || (sc > 0 && sn < 0)) {
            // intersection point: cur + lambda (nxt - cur), lambda = vc / (vc - vn)
            const QuadraticNumber lambda = vc / (vc - vn);
            out.push_back({cur.x + lambda * (nxt.x - cur.x),
                           cur.y + lambda * (nxt.y - cur.y)});
        }
    }
    return out;
}

inline std::vector<Pt> dedupe(std::vector<Pt> v) {
    std::vector<Pt> out;
    for (auto& p : v) {
        bool dup = false;
        for (const auto& q : out)
            if (p.x == q.x && p.y == q.y) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace poly

class TorusHitTester {
public:
    // columns a = A e1, b = A e2 of the integer matrix; corners and widths of
    // the boxes; all exact.
    TorusHitTester(Integer a1, Integer a2, Integer b1, Integer b2,
                   QuadraticNumber u0x, QuadraticNumber u0y, Rational wux, Rational wuy,
                   QuadraticNumber v0x, QuadraticNumber v0y, Rational wvx, Rational wvy)
        : a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)),
          u0x_(std::move(u0x)), u0y_(std::move(u0y)), wux_(std::move(wux)),
          wuy_(std::move(wuy)), v0x_(std::move(v0x)), v0y_(std::move(v0y)),
          wvx_(std::move(wvx)), wvy_(std::move(wvy)) {}

    TorusBoxHit run(uint64_t& cell_budget) const {
        // displacement d = A u0 - v0; conditions on (s,t) in [0,wux) x [0,wuy):
        //   x(s,t) = d1 + a1 s + b1 t in [k1, k1 + wvx) for some integer k1
        //   y(s,t) = d2 + a2 s + b2 t in [k2, k2 + wvy) for some integer k2
        const QuadraticNumber d1 =
            Rational(a1_) * u0x_ + Rational(b1_) * u0y_ - v0x_;
        const QuadraticNumber d2 =
            Rational(a2_) * u0x_ + Rational(b2_) * u0y_ - v0y_;

        const QuadraticNumber x_lo = d1 + min(QuadraticNumber(), Rational(a1_) * QuadraticNumber(wux_)) +
                                     min(QuadraticNumber(), Rational(b1_) * QuadraticNumber(wuy_));
        const QuadraticNumber x_hi = d1 + max(QuadraticNumber(), Rational(a1_) * QuadraticNumber(wux_)) +
                                     max(QuadraticNumber(), Rational(b1_) * QuadraticNumber(wuy_));

        Integer k1 = (x_lo - QuadraticNumber(wvx_)).floor();
        const Integer k1_end = x_hi.floor();
        for (; k1 <= k1_end; ++k1) {
            if (cell_budget == 0)
                throw budget_error("torus hitting: cell budget exhausted; "
                                   "reduce the horizon or resolution");
            --cell_budget;
            // clip the (s,t) box by k1 <= x(s,t) <= k1 + wvx
            std::vector<poly::Pt> p{{QuadraticNumber(), QuadraticNumber()},
                                    {QuadraticNumber(wux_), QuadraticNumber()},
                                    {QuadraticNumber(wux_), QuadraticNumber(wuy_)},
                                    {QuadraticNumber(), QuadraticNumber(wuy_)}};
            const Rational ra1(a1_), rb1(b1_), ra2(a2_), rb2(b2_);
            p = poly::clip(p, -ra1, -rb1, d1 - QuadraticNumber(Rational(k1)));
            if (p.empty()) continue;
            p = poly::clip(p, ra1, rb1, QuadraticNumber(Rational(k1)) + QuadraticNumber(wvx_) - d1);
            if (p.empty()) continue;

            // y-range over the strip
            QuadraticNumber ylo = d2 + ra2 * p[0].x + rb2 * p[0].y;
            QuadraticNumber yhi = ylo;
            for (size_t i = 1; i < p.size(); ++i) {
                const QuadraticNumber v = d2 + ra2 * p[i].x + rb2 * p[i].y;
                if (v < ylo) ylo = v;
                if (v > yhi) yhi = v;
            }
            Integer k2 = (ylo - QuadraticNumber(wvy_)).floor();
            const Integer k2_end = yhi.floor();
            for (; k2 <= k2_end; ++k2) {
                if (cell_budget == 0)
                    throw budget_error("torus hitting: cell budget exhausted; "
                                       "reduce the horizon or resolution");
                --cell_budget;
                auto q = poly::clip(p, -ra2, -rb2, d2 - QuadraticNumber(Rational(k2)));
                if (q.empty()) continue;
                q = poly::clip(q, ra2, rb2,
                               QuadraticNumber(Rational(k2)) + QuadraticNumber(wvy_) - d2);
                q = poly::dedupe(std::move(q));
                if (q.empty()) continue;
                const auto witness = pick_half_open_point(q, k1, k2);
                if (witness) return {true, witness->x, witness->y};
            }
        }
        return {false, QuadraticNumber(), QuadraticNumber()};
    }

private:
    // q is the closed feasible polygon; find a point satisfying the four
    // strict sides s < wux, t < wuy, x < k1 + wvx, y < k2 + wvy.
    std::optional<poly::Pt> pick_half_open_point(const std::vector<poly::Pt>& q,
                                                 const Integer& k1,
                                                 const Integer& k2) const {
        auto strict_ok = [&](const poly::Pt& p) {
            if ((p.x - QuadraticNumber(wux_)).sign() >= 0) return false;
            if ((p.y - QuadraticNumber(wuy_)).sign() >= 0) return false;
            if (p.x.sign() < 0 || p.y.sign() < 0) return false;  // safety
            const QuadraticNumber xv =
                (Rational(a1_) * p.x + Rational(b1_) * p.y) +
                (Rational(a1_) * u0x_ + Rational(b1_) * u0y_ - v0x_);
            if ((xv - QuadraticNumber(Rational(k1)) - QuadraticNumber(wvx_)).sign() >= 0)
                return false;
            if ((xv - QuadraticNumber(Rational(k1))).sign() < 0) return false;
            const QuadraticNumber yv =
                (Rational(a2_) * p.x + Rational(b2_) * p.y) +
                (Rational(a2_) * u0x_ + Rational(b2_) * u0y_ - v0y_);
            if ((yv - QuadraticNumber(Rational(k2)) - QuadraticNumber(wvy_)).sign() >= 0)
                return false;
            if ((yv - QuadraticNumber(Rational(k2))).sign() < 0) return false;
            return true;
        };
        // centroid first: interior of a nondegenerate feasible polygon
        if (q.size() >= 3) {
            poly::Pt c{QuadraticNumber(), QuadraticNumber()};
            for (const auto& p : q) {
                c.x += p.x;
                c.y += p.y;
            }
            const Rational inv(1, static_cast<long>(q.size()));
            c.x = inv * c.x;
            c.y = inv * c.y;
            if (strict_ok(c)) return c;
        }
        // degenerate cases: probe vertices and rational points of the hull
        for (const auto& p : q)
            if (strict_ok(p)) return p;
        if (q.size() >= 2) {
            // probe points along the segment between the two extreme vertices;
            // only finitely many parameters can sit on a strict boundary
            const poly::Pt& A = q.front();
            const poly::Pt& B = q.back();
            const long nums[5] = {1, 1, 2, 1, 3};
            const long dens[5] = {2, 3, 3, 5, 5};
            for (int i = 0; i < 5; ++i) {
                const Rational lam(nums[i], dens[i]);
                poly::Pt m{A.x + lam * (B.x - A.x), A.y + lam * (B.y - A.y)};
                if (strict_ok(m)) return m;
            }
        }
        return std::nullopt;
    }

    Integer a1_, a2_, b1_, b2_;
    QuadraticNumber u0x_, u0y_;
    Rational wux_, wuy_;
    QuadraticNumber v0x_, v0y_;
    Rational wvx_, wvy_;
};

}  // namespace dc1lab::furstenberg::detail
