#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dc1lab/construct.hpp"
#include "dc1lab/orbitstats.hpp"

using namespace dc1lab;
using namespace dc1lab::systems;
using namespace dc1lab::orbitstats;

TEST_CASE("checkpoint schedules") {
    const CheckpointSchedule s(10, 100, Rational(2));
    REQUIRE(s.checkpoints() == std::vector<uint64_t>{10, 20, 40, 80, 100});
    REQUIRE_THROWS_AS(CheckpointSchedule(0, 10, Rational(2)), precondition_error);
    REQUIRE_THROWS_AS(CheckpointSchedule(5, 10, Rational(1)), precondition_error);
    // the last checkpoint is always m_max
    const CheckpointSchedule t(1000, 12345, Rational(11, 10));
    REQUIRE(t.checkpoints().back() == 12345);
}

TEST_CASE("density profiles: worked examples") {
    const CheckpointSchedule s(10, 100, Rational(10));
    const auto p = density_profile([](uint64_t i) { return i < 10; }, s);
    REQUIRE(p.checkpoints == std::vector<uint64_t>{10, 100});
    REQUIRE(p.densities[0] == Rational(1));
    REQUIRE(p.densities[1] == Rational(1, 10));
    REQUIRE(p.limsup_estimate == Rational(1));
    REQUIRE(p.liminf_estimate == Rational(1, 10));

    const auto q = density_profile([](uint64_t) { return true; }, s);
    REQUIRE(q.limsup_estimate == Rational(1));
    REQUIRE(q.liminf_estimate == Rational(1));

    const CheckpointSchedule s3(10, 1000, Rational(10));
    const auto r = density_profile([](uint64_t i) { return i % 2 == 0; }, s3);
    for (const auto& d : r.densities) REQUIRE(d == Rational(1, 2));
}

TEST_CASE("density profiles are exact under recount") {
    std::mt19937_64 rng(41);
    const CheckpointSchedule s(50, 5000, Rational(13, 10));
    // a deterministic pseudo-random indicator
    auto ind = [](uint64_t i) { return ((i * 2654435761u) >> 7) % 3 == 0; };
    const auto p = density_profile(ind, s);
    std::uniform_int_distribution<size_t> pick(0, p.checkpoints.size() - 1);
    for (int t = 0; t < 100; ++t) {
        const size_t c = pick(rng);
        uint64_t count = 0;
        for (uint64_t i = 0; i < p.checkpoints[c]; ++i) count += ind(i);
        Rational expect{Integer(count), Integer(p.checkpoints[c])};
        expect.canonicalize();
        REQUIRE(p.densities[c] == expect);
        // m * d_m is an integer
        REQUIRE(floor_rational(p.densities[c] * Integer(p.checkpoints[c])) ==
                Integer(count));
    }
}

TEST_CASE("tuple statistics: distal fixed points") {
    const SystemSpec shift = make_full_shift(2);
    const Point zeros = make_shift_point(SymbolicSequence::constant(2, 0));
    const Point ones = make_shift_point(SymbolicSequence::constant(2, 1));
    const CheckpointSchedule s(10, 1000, Rational(2));
    const auto v = dc1_tuple_statistics(shift, {zeros, ones},
                                        QuadraticNumber(Rational(1, 2)),
                                        {QuadraticNumber(Rational(1, 8))}, s);
    REQUIRE(v.a_profile.limsup_estimate == Rational(1));
    REQUIRE(v.a_profile.liminf_estimate == Rational(1));
    REQUIRE(v.b_profiles[0].limsup_estimate == Rational(0));
    REQUIRE(!v.dc1_evidence);
}

TEST_CASE("tuple statistics: structural equality is rejected") {
    const SystemSpec shift = make_full_shift(2);
    const Point zeros = make_shift_point(SymbolicSequence::constant(2, 0));
    const CheckpointSchedule s(10, 100, Rational(2));
    REQUIRE_THROWS_AS(dc1_tuple_statistics(shift, {zeros, zeros},
                                           QuadraticNumber(Rational(1, 2)),
                                           {QuadraticNumber(Rational(1, 8))}, s),
                      precondition_error);
}

TEST_CASE("tuple statistics: generic path on a rotation") {
    // isometry: min = max = initial distance at every index
    const SystemSpec rot = make_rotation(QuadraticNumber::golden());
    const Point a = make_circle_point(QuadraticNumber());
    const Point b = make_circle_point(QuadraticNumber(Rational(1, 3)));
    const CheckpointSchedule s(10, 500, Rational(2));
    const auto v = dc1_tuple_statistics(rot, {a, b}, QuadraticNumber(Rational(1, 4)),
                                        {QuadraticNumber(Rational(1, 2)),
                                         QuadraticNumber(Rational(1, 8))},
                                        s);
    // d = 1/3 > 1/4 everywhere: A density 1; 1/3 < 1/2: B(1/2) density 1;
    // 1/3 >= 1/8: B(1/8) density 0
    REQUIRE(v.a_profile.liminf_estimate == Rational(1));
    REQUIRE(v.b_profiles[0].liminf_estimate == Rational(1));
    REQUIRE(v.b_profiles[1].limsup_estimate == Rational(0));
}

TEST_CASE("tuple statistics budget") {
    const SystemSpec shift = make_full_shift(2);
    const Point zeros = make_shift_point(SymbolicSequence::constant(2, 0));
    const Point ones = make_shift_point(SymbolicSequence::constant(2, 1));
    const CheckpointSchedule s(10, 1000, Rational(2));
    REQUIRE_THROWS_AS(dc1_tuple_statistics(shift, {zeros, ones},
                                           QuadraticNumber(Rational(1, 2)),
                                           {QuadraticNumber(Rational(1, 8))}, s,
                                           Rational(1, 100), 100),
                      budget_error);
}

TEST_CASE("distal check: periodic certificates") {
    const SystemSpec shift = make_full_shift(2);
    std::vector<Point> orbit3{
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {0, 0, 1}))),
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {0, 1, 0}))),
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {1, 0, 0})))};
    const auto rep = distal_tuple_check(shift, orbit3, 1000);
    REQUIRE(rep.certified);
    // oracle: min over one period of pairwise distances
    QuadraticNumber expect;
    bool first = true;
    std::vector<Point> state = orbit3;
    for (int i = 0; i < 3; ++i) {
        for (size_t a = 0; a < 3; ++a)
            for (size_t b = a + 1; b < 3; ++b) {
                const auto d = distance(shift, state[a], state[b]);
                if (first || d < expect) {
                    expect = d;
                    first = false;
                }
            }
        for (auto& p : state) p = step(shift, p);
    }
    REQUIRE(rep.min_separation == expect);
    REQUIRE(rep.min_separation == QuadraticNumber(Rational(1, 2)));
}

TEST_CASE("distal check: rotation isometry certificate") {
    const SystemSpec rot = make_rotation(QuadraticNumber::golden());
    const auto rep = distal_tuple_check(
        rot, {make_circle_point(QuadraticNumber()),
              make_circle_point(QuadraticNumber(Rational(1, 3)))},
        100);
    REQUIRE(rep.certified);
    REQUIRE(rep.min_separation == QuadraticNumber(Rational(1, 3)));
}

TEST_CASE("distal check: eventually periodic pair") {
    const SystemSpec shift = make_full_shift(2);
    const Point zeros = make_shift_point(SymbolicSequence::constant(2, 0));
    const Point pert = make_shift_point(SymbolicSequence(2, PrefixPeriodic({0}, {1})));
    const auto rep = distal_tuple_check(shift, {zeros, pert}, 1000);
    REQUIRE(rep.certified);
    REQUIRE(rep.min_separation == QuadraticNumber(Rational(1, 2)));
    REQUIRE(rep.attained_at == 0);
}

TEST_CASE("derive_deltas") {
    const auto s1 = derive_deltas(QuadraticNumber(Rational(1)));
    REQUIRE(s1.delta == QuadraticNumber(Rational(1, 2)));
    REQUIRE(s1.eps == QuadraticNumber(Rational(1, 4)));
    const auto s2 = derive_deltas(QuadraticNumber(Rational(1, 3)));
    REQUIRE(s2.delta == QuadraticNumber(Rational(1, 6)));
    REQUIRE(s2.eps == QuadraticNumber(Rational(1, 12)));
    // delta + eps < s exactly
    REQUIRE((s2.delta + s2.eps - QuadraticNumber(Rational(1, 3))).sign() < 0);
    REQUIRE_THROWS_AS(derive_deltas(QuadraticNumber()), precondition_error);
}

TEST_CASE("omega estimates") {
    const SystemSpec quarter = make_rotation(QuadraticNumber(Rational(1, 4)));
    const auto rep = omega_limit_estimate(quarter, make_circle_point(QuadraticNumber()),
                                          1000, 2);
    REQUIRE(rep.visited_cells == 4);
    for (uint64_t h : rep.hit_counts) REQUIRE(h == 125);  // 500 post burn-in over 4 cells
    REQUIRE(rep.periodic_proximity);
    REQUIRE(rep.detected_period == 4);

    const SystemSpec golden = make_rotation(QuadraticNumber::golden());
    const auto rep2 = omega_limit_estimate(golden, make_circle_point(QuadraticNumber()),
                                           2000, 3);
    REQUIRE(rep2.visited_cells == 8);  // equidistribution evidence
    REQUIRE(!rep2.periodic_proximity);

    const SystemSpec shift = make_full_shift(2);
    const Point pert = make_shift_point(SymbolicSequence(2, PrefixPeriodic({1}, {0})));
    const auto rep3 = omega_limit_estimate(shift, pert, 600, 4);
    REQUIRE(rep3.visited_cells == 1);  // only the all-zero cylinder after burn-in
    REQUIRE(rep3.periodic_proximity);
    REQUIRE(rep3.detected_period == 1);
}

TEST_CASE("A profiles are antitone in delta across runs") {
    // the same tuple measured at a larger delta can only lose A-indices
    const auto seqs = dc1lab::construct::build_dc1_tuple(
        2, dc1lab::construct::BlockSchedule::classic());
    const SystemSpec shift = make_full_shift(3);
    std::vector<Point> tuple;
    for (const auto& s : seqs) tuple.push_back(make_shift_point(s));
    const CheckpointSchedule cps(10, 2520, Rational(3, 2));
    const auto loose = dc1_tuple_statistics(shift, tuple, QuadraticNumber(Rational(1, 4)),
                                            {QuadraticNumber(Rational(1, 8))}, cps);
    const auto tight = dc1_tuple_statistics(shift, tuple, QuadraticNumber(Rational(1, 2)),
                                            {QuadraticNumber(Rational(1, 8))}, cps);
    for (size_t i = 0; i < loose.a_profile.densities.size(); ++i)
        REQUIRE(tight.a_profile.densities[i] <= loose.a_profile.densities[i]);
}

TEST_CASE("B profiles vanish on distal periodic tuples") {
    // n distinct points of one periodic orbit: max pairwise distance never
    // drops below the separation, so every B_eps with eps below it is empty
    const SystemSpec shift = make_full_shift(2);
    std::vector<Point> orbit3{
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {0, 0, 1}))),
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {0, 1, 0}))),
        make_shift_point(SymbolicSequence(2, PrefixPeriodic({}, {1, 0, 0})))};
    const auto sep = distal_tuple_check(shift, orbit3, 100);
    REQUIRE(sep.min_separation == QuadraticNumber(Rational(1, 2)));
    const CheckpointSchedule cps(10, 300, Rational(2));
    const auto v = dc1_tuple_statistics(shift, orbit3, QuadraticNumber(Rational(1, 8)),
                                        {QuadraticNumber(Rational(1, 4))}, cps);
    REQUIRE(v.b_profiles[0].limsup_estimate == Rational(0));
}

TEST_CASE("tuple statistics match a brute-force recount on random pp tuples") {
    // independent route: per-index pairwise distances via the metric, not the
    // windowed scan the statistics loop uses
    std::mt19937_64 rng(61);
    const SystemSpec shift = make_full_shift(3);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<systems::Symbol> sym(0, 2);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point> tuple;
        while (tuple.size() < 3) {
            Word prefix, period;
            const int np = len(rng) - 1, nl = len(rng);
            for (int i = 0; i < np; ++i) prefix.push_back(sym(rng));
            for (int i = 0; i < nl; ++i) period.push_back(sym(rng));
            const Point p = make_shift_point(
                SymbolicSequence(3, PrefixPeriodic(prefix, period)));
            bool dup = false;
            for (const auto& q : tuple) dup = dup || point_equal(p, q);
            if (!dup) tuple.push_back(p);
        }
        const QuadraticNumber delta(Rational(1, 2));
        const std::vector<QuadraticNumber> grid{QuadraticNumber(Rational(1, 4)),
                                                QuadraticNumber(Rational(1, 16))};
        const CheckpointSchedule cps(5, 120, Rational(3, 2));
        const auto v = dc1_tuple_statistics(shift, tuple, delta, grid, cps);

        uint64_t count_a = 0;
        std::vector<uint64_t> count_b(grid.size(), 0);
        size_t ci = 0;
        for (uint64_t i = 0; i < 120 && ci < v.a_profile.checkpoints.size(); ++i) {
            QuadraticNumber dmin, dmax;
            bool first = true;
            for (size_t a = 0; a < 3; ++a)
                for (size_t b = a + 1; b < 3; ++b) {
                    const auto& sa = std::get<ShiftPoint>(tuple[a].kind().v);
                    const auto& sb = std::get<ShiftPoint>(tuple[b].kind().v);
                    const QuadraticNumber d =
                        distance(shift, make_shift_point(sa.seq, sa.offset + i),
                                 make_shift_point(sb.seq, sb.offset + i));
                    if (first || d < dmin) dmin = d;
                    if (first || d > dmax) dmax = d;
                    first = false;
                }
            if ((dmin - delta).sign() > 0) ++count_a;
            for (size_t e = 0; e < grid.size(); ++e)
                if ((dmax - grid[e]).sign() < 0) ++count_b[e];
            if (i + 1 == v.a_profile.checkpoints[ci]) {
                Rational da{Integer(count_a), Integer(i + 1)};
                da.canonicalize();
                REQUIRE(v.a_profile.densities[ci] == da);
                for (size_t e = 0; e < grid.size(); ++e) {
                    Rational db{Integer(count_b[e]), Integer(i + 1)};
                    db.canonicalize();
                    REQUIRE(v.b_profiles[e].densities[ci] == db);
                }
                ++ci;
            }
        }
    }
}
