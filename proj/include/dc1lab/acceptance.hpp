#pragma once

#include <chrono>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dc1lab/dc1lab.hpp"

namespace dc1lab::acceptance {

using io::Json;
using systems::Point;
using systems::QuadraticNumber;
using systems::SystemSpec;

struct AcceptanceConfig {
    uint64_t seed = 42;
    uint64_t m_max = 1'000'000;        // tuple statistics horizon (criteria 1-2)
    uint64_t set_horizon = 10'000;     // criteria 3, 4, 9
    uint64_t orbit_horizon = 100'000;  // criterion 5
    size_t random_pairs = 100;         // criterion 5
    size_t random_sets = 1000;         // criterion 9
    size_t doubling_configs = 20;      // criterion 7
    double runtime_bound_seconds = 30.0;  // criterion 1
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    Json data;  // exact values only; deterministic
    double seconds = 0.0;
};

struct AcceptanceOutcome {
    std::vector<CriterionResult> results;
    bool all_pass = false;
    Json report;                // full report including metadata
    std::string payload_bytes;  // canonical bytes with metadata stripped
};

namespace detail {

using construct::BlockSchedule;

// Independent count oracle for the constant-anchor construction: the minimum
// pairwise distance is 1 exactly at distal-phase indices, and the pairwise
// first disagreement at a proximal index is the distance to the phase end.
// Counts reduce to interval arithmetic over the exact phase ends.
inline Integer oracle_a_count(const std::vector<Integer>& ends, const Integer& m) {
    Integer count(0), prev(0);
    for (size_t k = 1; k <= ends.size(); ++k) {
        const Integer lo = prev;
        Integer hi = ends[k - 1] < m ? ends[k - 1] : m;
        if (hi > lo && k % 2 == 0) count += hi - lo;
        prev = ends[k - 1];
        if (ends[k - 1] >= m) break;
    }
    return count;
}

inline Integer oracle_b_count(const std::vector<Integer>& ends, const Integer& m,
                              uint64_t window) {
    Integer count(0), prev(0);
    for (size_t k = 1; k <= ends.size(); ++k) {
        if (k % 2 == 1) {
            const Integer lo = prev;
            Integer cut = ends[k - 1] - static_cast<long>(window) + 1;
            if (cut > m) cut = m;
            if (cut > lo) count += cut - lo;
        }
        prev = ends[k - 1];
        if (ends[k - 1] >= m) break;
    }
    return count;
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

inline Json rational_json(const Rational& r) { return io::rational_to_json(r); }

// criteria 1-2: constructed tuple statistics vs the interval-count oracle
inline CriterionResult tuple_criterion(int id, size_t n, const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = id;
    res.name = "constructed " + std::string(n == 2 ? "pair" : "triple") +
               " reaches both density conditions at m_max with exact cross-check";
    Timer timer;

    const BlockSchedule sched;  // default construction schedule
    const auto seqs = construct::build_dc1_tuple(n, sched);
    const SystemSpec shift = systems::make_full_shift(static_cast<uint32_t>(n) + 1);
    std::vector<Point> tuple;
    for (const auto& s : seqs) tuple.push_back(systems::make_shift_point(s));

    const QuadraticNumber delta(Rational(1, 2));
    const std::vector<QuadraticNumber> eps_grid{QuadraticNumber(Rational(1, 8)),
                                                QuadraticNumber(Rational(1, 32)),
                                                QuadraticNumber(Rational(1, 256))};
    const orbitstats::CheckpointSchedule cps(1000, cfg.m_max, Rational(1001, 1000));
    const auto verdict =
        orbitstats::dc1_tuple_statistics(shift, tuple, delta, eps_grid, cps);
    res.seconds = timer.seconds();

    const Rational bar(99, 100);
    bool thresholds = verdict.a_profile.limsup_estimate >= bar;
    for (const auto& b : verdict.b_profiles)
        thresholds = thresholds && b.limsup_estimate >= bar;

    // exact cross-check of every checkpoint count against the interval oracle
    const auto ends = sched.phase_ends_exact(24);
    bool counts_match = true;
    for (size_t ci = 0; ci < verdict.a_profile.checkpoints.size() && counts_match; ++ci) {
        const Integer m(static_cast<unsigned long>(verdict.a_profile.checkpoints[ci]));
        const Integer expect_a = oracle_a_count(ends, m);
        counts_match = verdict.a_profile.densities[ci] * Rational(m) == Rational(expect_a);
        for (size_t e = 0; e < eps_grid.size() && counts_match; ++e) {
            const uint64_t window = orbitstats::detail::smallest_k_with_pow2_below(
                eps_grid[e], systems::kComparisonBound);
            const Integer expect_b = oracle_b_count(ends, m, window);
            counts_match =
                verdict.b_profiles[e].densities[ci] * Rational(m) == Rational(expect_b);
        }
    }

    const bool runtime_ok = id != 1 || res.seconds <= cfg.runtime_bound_seconds;
    res.pass = thresholds && counts_match && runtime_ok;
    res.detail = "A limsup estimate " + verdict.a_profile.limsup_estimate.get_str() +
                 ", B estimates";
    Json bs = Json::array();
    for (const auto& b : verdict.b_profiles) {
        res.detail += " " + b.limsup_estimate.get_str();
        bs.push_back(rational_json(b.limsup_estimate));
    }
    res.detail += counts_match ? "; oracle counts match exactly"
                               : "; ORACLE COUNT MISMATCH";
    res.data = Json{{"a_limsup_estimate", rational_json(verdict.a_profile.limsup_estimate)},
                    {"b_limsup_estimates", bs},
                    {"oracle_counts_match", counts_match},
                    {"dc1_evidence", verdict.dc1_evidence},
                    {"runtime_within_bound", runtime_ok}};
    return res;
}

inline CriterionResult lemma13_criterion(const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = 3;
    res.name = "difference sets of golden-rotation return sets stay inside the exact "
               "ball-hitting sets";
    Timer timer;
    const SystemSpec golden = systems::make_rotation(QuadraticNumber::golden());
    const Point y = systems::make_circle_point(QuadraticNumber());
    bool pass = true;
    Json cases = Json::array();
    for (const long den : {20L, 50L}) {
        const QuadraticNumber delta(Rational(1, den));
        const auto returns =
            furstenberg::bohr_set(golden, y, delta, cfg.set_horizon);
        const auto diffs = furstenberg::difference_set(returns);
        const auto ballhit = furstenberg::detail::ball_hitting(golden, y, delta,
                                                               cfg.set_horizon);
        uint64_t violations = 0;
        for (uint64_t m : diffs.members())
            if (!ballhit.contains(m)) ++violations;
        pass = pass && violations == 0;
        cases.push_back(Json{{"delta", "1/" + std::to_string(den)},
                             {"return_set_size", returns.size()},
                             {"difference_set_size", diffs.size()},
                             {"violations", violations}});
    }
    res.seconds = timer.seconds();
    res.pass = pass;
    res.detail = pass ? "zero violations at both radii" : "INCLUSION VIOLATED";
    res.data = Json{{"cases", cases}};
    return res;
}

inline CriterionResult lemma12_criterion(const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = 4;
    res.name = "return sets of a nearby orbit point embed into the target's return set";
    Timer timer;
    const SystemSpec golden = systems::make_rotation(QuadraticNumber::golden());
    const Point p = systems::make_circle_point(QuadraticNumber());
    const Point q = systems::make_circle_point(QuadraticNumber(Rational(1, 2)));
    bool pass = true;
    Json cases = Json::array();
    for (const long den : {10L, 50L}) {
        const auto rep = furstenberg::lemma12_inclusion_check(
            golden, p, q, QuadraticNumber(Rational(1, den)), cfg.set_horizon);
        pass = pass && rep.applicable && rep.violations == 0;
        cases.push_back(Json{{"eps", "1/" + std::to_string(den)},
                             {"found_index", rep.i},
                             {"applicable", rep.applicable},
                             {"violations", rep.violations}});
    }
    res.seconds = timer.seconds();
    res.pass = pass;
    res.detail = pass ? "inclusions hold with zero violations" : "INCLUSION VIOLATED";
    res.data = Json{{"cases", cases}};
    return res;
}

inline CriterionResult isometry_criterion(const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = 5;
    res.name = "golden-rotation orbit distances never move (exact field equality)";
    Timer timer;
    std::mt19937_64 rng(cfg.seed * 1000003 + 5);
    std::uniform_int_distribution<long> den(2, 64);
    std::uniform_int_distribution<int> mix(0, 2);
    const QuadraticNumber angle = QuadraticNumber::golden();
    uint64_t violations = 0;
    for (size_t pair = 0; pair < cfg.random_pairs; ++pair) {
        auto draw = [&]() {
            const long q = den(rng);
            std::uniform_int_distribution<long> num(0, q - 1);
            QuadraticNumber v(make_rational(num(rng), q));
            if (mix(rng) == 0) v += make_rational(1, den(rng)) * QuadraticNumber::golden();
            return v.mod1();
        };
        QuadraticNumber x = draw();
        QuadraticNumber y = draw();
        const QuadraticNumber d0 = systems::detail::circle_distance(x, y);
        // wrap distance equals d0 exactly iff |x - y| is d0 or 1 - d0; the
        // scratch objects keep the 10^5-step loop allocation-free
        const QuadraticNumber d0_flip = QuadraticNumber(Rational(1)) - d0;
        QuadraticNumber t, scratch;
        for (uint64_t i = 0; i < cfg.orbit_horizon; ++i) {
            systems::add_mod1(x, angle, scratch);
            systems::add_mod1(y, angle, scratch);
            t = x;
            t -= y;
            t.abs_in_place();
            if (!(t == d0 || t == d0_flip)) {
                ++violations;
                break;
            }
        }
    }
    res.seconds = timer.seconds();
    res.pass = violations == 0;
    res.detail = std::to_string(cfg.random_pairs) + " pairs over " +
                 std::to_string(cfg.orbit_horizon) + " steps, " +
                 std::to_string(violations) + " violations";
    res.data = Json{{"pairs", cfg.random_pairs},
                    {"steps", cfg.orbit_horizon},
                    {"violations", violations}};
    return res;
}

inline CriterionResult contraction_criterion(const AcceptanceConfig&) {
    CriterionResult res;
    res.id = 6;
    res.name = "cat-map stable line contracts by (3 - sqrt5)/2 exactly";
    Timer timer;
    const systems::TorusAutomorphism cat{2, 1, 1, 1};
    const SystemSpec spec = systems::make_torus_automorphism(2, 1, 1, 1);
    const Point origin = systems::make_torus_point(QuadraticNumber(), QuadraticNumber());
    const auto slp = stable::stable_line_point(cat, origin, Rational(1, 100));
    const QuadraticNumber lam = slp.direction.eigenvalue;

    Point y = slp.point;
    QuadraticNumber d = systems::distance(spec, origin, y);
    uint64_t exact_ratio_steps = 0;
    bool ratios_exact = true;
    for (int i = 0; i < 60; ++i) {
        y = systems::step(spec, y);
        const QuadraticNumber dn = systems::distance(spec, origin, y);
        if (dn == lam * d)
            ++exact_ratio_steps;
        else
            ratios_exact = false;
        d = dn;
    }
    const bool small = (d - QuadraticNumber(pow2(-40))).sign() <= 0;
    res.seconds = timer.seconds();
    res.pass = ratios_exact && exact_ratio_steps >= 20 && small;
    res.detail = "exact ratio held for " + std::to_string(exact_ratio_steps) +
                 "/60 steps; final distance below 2^-40: " + (small ? "yes" : "no");
    res.data = Json{{"exact_ratio_steps", exact_ratio_steps},
                    {"final_distance_below_2pow40", small}};
    return res;
}

inline CriterionResult cover_criterion(const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = 7;
    res.name = "stable sets of the sample cover every basis cell; doubling eps never "
               "hurts";
    Timer timer;
    const SystemSpec shift = systems::make_full_shift(2);
    const Point zeros =
        systems::make_shift_point(systems::SymbolicSequence::constant(2, 0));
    const auto shift_cover = stable::stable_cover_report(
        shift, {zeros}, QuadraticNumber(Rational(1, 100)), 8, 16, 400);

    const SystemSpec cat = systems::make_torus_automorphism(2, 1, 1, 1);
    const Point origin = systems::make_torus_point(QuadraticNumber(), QuadraticNumber());
    const auto cat_cover = stable::stable_cover_report(
        cat, {origin}, QuadraticNumber(Rational(1, 100)), 5, 16, 400);

    bool doubling_ok = true;
    std::mt19937_64 rng(cfg.seed * 1000003 + 7);
    const SystemSpec golden = systems::make_rotation(QuadraticNumber::golden());
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<long> ed(8, 200);
    Json doubles = Json::array();
    for (size_t t = 0; t < cfg.doubling_configs; ++t) {
        const int k = kind(rng);
        const QuadraticNumber eps(Rational(1, ed(rng)));
        Rational c1, c2;
        if (k == 0) {
            std::uniform_int_distribution<int> res_d(3, 6);
            const uint32_t r = res_d(rng);
            c1 = stable::stable_cover_report(shift, {zeros}, eps, r, 8, 200).coverage;
            c2 = stable::stable_cover_report(shift, {zeros}, Rational(2) * eps, r, 8, 200)
                     .coverage;
        } else if (k == 1) {
            std::uniform_int_distribution<int> res_d(2, 4);
            const uint32_t r = res_d(rng);
            c1 = stable::stable_cover_report(cat, {origin}, eps, r, 8, 256).coverage;
            c2 = stable::stable_cover_report(cat, {origin}, Rational(2) * eps, r, 8, 256)
                     .coverage;
        } else {
            std::uniform_int_distribution<int> res_d(2, 5);
            std::uniform_int_distribution<int> len(4, 24);
            const uint32_t r = res_d(rng);
            std::vector<Point> sample;
            Point p = systems::make_circle_point(QuadraticNumber());
            const int n = len(rng);
            for (int i = 0; i < n; ++i) {
                sample.push_back(p);
                p = systems::step(golden, p);
            }
            c1 = stable::stable_cover_report(golden, sample, eps, r, 8, 64).coverage;
            c2 = stable::stable_cover_report(golden, sample, Rational(2) * eps, r, 8, 64)
                     .coverage;
        }
        doubling_ok = doubling_ok && c2 >= c1;
        doubles.push_back(Json{{"kind", k},
                               {"coverage_eps", rational_json(c1)},
                               {"coverage_2eps", rational_json(c2)}});
    }

    res.seconds = timer.seconds();
    res.pass = shift_cover.coverage == Rational(1) && cat_cover.coverage == Rational(1) &&
               doubling_ok;
    res.detail = "shift coverage " + shift_cover.coverage.get_str() + ", cat-map coverage " +
                 cat_cover.coverage.get_str() + ", doubling monotone: " +
                 (doubling_ok ? "yes" : "no");
    res.data = Json{{"shift_coverage", rational_json(shift_cover.coverage)},
                    {"cat_coverage", rational_json(cat_cover.coverage)},
                    {"doubling", doubles}};
    return res;
}

inline CriterionResult transitivity_criterion(const AcceptanceConfig&) {
    CriterionResult res;
    res.id = 8;
    res.name = "transitivity matrices: full shift and product are complete, rational "
               "rotation is not";
    Timer timer;
    const SystemSpec shift = systems::make_full_shift(2);
    const auto plain = furstenberg::transitivity_report(shift, 3, 20, furstenberg::Plain{});
    const auto& pm = plain.matrices[0];
    const bool shift_ok =
        pm.entries.size() == 64 && pm.unknown_count == 0 && pm.max_hit && *pm.max_hit <= 3;

    const SystemSpec orbit = systems::make_restriction(
        shift,
        {systems::make_shift_point(
             systems::SymbolicSequence(2, systems::PrefixPeriodic({}, {0, 0, 1}))),
         systems::make_shift_point(
             systems::SymbolicSequence(2, systems::PrefixPeriodic({}, {0, 1, 0}))),
         systems::make_shift_point(
             systems::SymbolicSequence(2, systems::PrefixPeriodic({}, {1, 0, 0})))});
    const auto prod =
        furstenberg::transitivity_report(shift, 2, 30, furstenberg::ProductWith{orbit});
    const bool prod_ok = prod.matrices[0].unknown_count == 0;

    const SystemSpec quarter = systems::make_rotation(QuadraticNumber(Rational(1, 4)));
    const auto neg = furstenberg::transitivity_report(quarter, 3, 100, furstenberg::Plain{});
    const bool neg_ok = neg.matrices[0].unknown_count > 0;

    res.seconds = timer.seconds();
    res.pass = shift_ok && prod_ok && neg_ok;
    res.detail = "shift max first-hit " +
                 (pm.max_hit ? std::to_string(*pm.max_hit) : std::string("-")) +
                 ", product unknowns " + std::to_string(prod.matrices[0].unknown_count) +
                 ", rotation unknowns " + std::to_string(neg.matrices[0].unknown_count);
    res.data = Json{{"shift_pairs", pm.entries.size()},
                    {"shift_unknowns", pm.unknown_count},
                    {"shift_max_hit", pm.max_hit ? Json(*pm.max_hit) : Json(nullptr)},
                    {"product_unknowns", prod.matrices[0].unknown_count},
                    {"rotation_unknowns", neg.matrices[0].unknown_count}};
    return res;
}

inline CriterionResult furstenberg_criterion(const AcceptanceConfig& cfg) {
    CriterionResult res;
    res.id = 9;
    res.name = "set-algebra properties hold on seeded random index sets";
    Timer timer;
    std::mt19937_64 rng(cfg.seed * 1000003 + 9);
    uint64_t violations = 0;

    // frozen example
    if (!(furstenberg::difference_set(furstenberg::IndexSet(10, {0, 2, 5})).members() ==
          std::vector<uint64_t>{0, 2, 3, 5}))
        ++violations;

    const uint64_t h = cfg.set_horizon;
    std::uniform_real_distribution<double> dens(0.001, 0.9);
    std::uniform_int_distribution<long> angle_den(3, 50);
    std::uniform_int_distribution<long> eps_den(4, 40);
    for (size_t t = 0; t < cfg.random_sets; ++t) {
        // superset B and subset A, both containing 0
        const double d = dens(rng);
        std::bernoulli_distribution coin(d), keep(0.7);
        std::vector<uint64_t> bm{0};
        for (uint64_t i = 1; i < h; ++i)
            if (coin(rng)) bm.push_back(i);
        std::vector<uint64_t> am;
        for (uint64_t i : bm)
            if (i == 0 || keep(rng)) am.push_back(i);
        const furstenberg::IndexSet b(h, std::move(bm));
        const furstenberg::IndexSet a(h, std::move(am));

        const auto da = furstenberg::difference_set(a);
        const auto db = furstenberg::difference_set(b);
        if (!da.subset_of(db) || !da.contains(0) || !a.subset_of(da)) ++violations;

        const auto frr = furstenberg::family_test(b, furstenberg::Frr{});
        if (frr.status == furstenberg::FamilyStatus::In) {
            const auto gap = furstenberg::max_gap(b);
            if (!gap || *gap > *frr.witness) ++violations;
        }

        if (!furstenberg::duality_check(a, 10).pass()) ++violations;

        // return-time monotonicity on a random rational rotation
        const long q = angle_den(rng);
        std::uniform_int_distribution<long> num(1, q - 1);
        const SystemSpec rot =
            systems::make_rotation(QuadraticNumber(make_rational(num(rng), q)));
        std::uniform_int_distribution<long> pnum(0, 6);
        const Point x = systems::make_circle_point(QuadraticNumber(make_rational(pnum(rng), 7)));
        const long ed = eps_den(rng);
        const QuadraticNumber eps_small(Rational(1, 2 * ed));
        const QuadraticNumber eps_large(Rational(1, ed));
        const auto small = furstenberg::return_times(rot, x, eps_small, h);
        const auto large = furstenberg::return_times(rot, x, eps_large, h);
        if (!small.subset_of(large)) ++violations;
    }

    res.seconds = timer.seconds();
    res.pass = violations == 0;
    res.detail = std::to_string(cfg.random_sets) + " random sets at horizon " +
                 std::to_string(h) + ", " + std::to_string(violations) + " violations";
    res.data = Json{{"sets", cfg.random_sets}, {"violations", violations}};
    return res;
}

inline Json payload_json(const AcceptanceConfig& cfg,
                         const std::vector<CriterionResult>& results, bool all_pass) {
    Json criteria = Json::array();
    for (const auto& r : results) {
        criteria.push_back(Json{{"id", r.id},
                                {"name", r.name},
                                {"pass", r.pass},
                                {"detail", r.detail},
                                {"data", r.data}});
    }
    return Json{{"schema", io::kSchema},
                {"type", "acceptance_report"},
                {"describes", "acceptance_suite"},
                {"seed", cfg.seed},
                {"config", Json{{"m_max", cfg.m_max},
                                {"set_horizon", cfg.set_horizon},
                                {"orbit_horizon", cfg.orbit_horizon},
                                {"random_pairs", cfg.random_pairs},
                                {"random_sets", cfg.random_sets},
                                {"doubling_configs", cfg.doubling_configs}}},
                {"criteria", criteria},
                {"all_pass", all_pass}};
}

inline std::vector<CriterionResult> run_criteria_1_to_9(const AcceptanceConfig& cfg) {
    std::vector<CriterionResult> results;
    results.push_back(tuple_criterion(1, 2, cfg));
    results.push_back(tuple_criterion(2, 3, cfg));
    results.push_back(lemma13_criterion(cfg));
    results.push_back(lemma12_criterion(cfg));
    results.push_back(isometry_criterion(cfg));
    results.push_back(contraction_criterion(cfg));
    results.push_back(cover_criterion(cfg));
    results.push_back(transitivity_criterion(cfg));
    results.push_back(furstenberg_criterion(cfg));
    return results;
}

}  // namespace detail

// Runs the whole suite. Criterion 10 (determinism) reruns criteria 1-9 with
// the same seed and compares the canonical payload bytes; the metadata block
// (wall-clock times) stays outside the compared payload.
inline AcceptanceOutcome run_acceptance(const AcceptanceConfig& cfg,
                                        std::ostream* log = nullptr) {
    AcceptanceOutcome out;
    out.results = detail::run_criteria_1_to_9(cfg);

    bool pass_1_9 = true;
    for (const auto& r : out.results) pass_1_9 = pass_1_9 && r.pass;

    detail::Timer det_timer;
    const auto rerun = detail::run_criteria_1_to_9(cfg);
    bool rerun_pass = true;
    for (const auto& r : rerun) rerun_pass = rerun_pass && r.pass;
    const std::string bytes1 = detail::payload_json(cfg, out.results, pass_1_9).dump(2);
    const std::string bytes2 = detail::payload_json(cfg, rerun, rerun_pass).dump(2);

    CriterionResult det;
    det.id = 10;
    det.name = "rerunning the suite with the same seed reproduces the report bytes";
    det.pass = bytes1 == bytes2;
    det.seconds = det_timer.seconds();
    det.detail = det.pass ? "payloads identical (" + std::to_string(bytes1.size()) + " bytes)"
                          : "PAYLOADS DIFFER";
    det.data = Json{{"payload_bytes", bytes1.size()}, {"identical", det.pass}};
    out.results.push_back(det);

    out.all_pass = pass_1_9 && det.pass;
    out.report = detail::payload_json(cfg, out.results, out.all_pass);
    out.payload_bytes = out.report.dump(2);

    Json runtimes = Json::array();
    for (const auto& r : out.results) runtimes.push_back(r.seconds);
    out.report["metadata"] = Json{{"criterion_seconds", runtimes}};

    if (log) {
        for (const auto& r : out.results) {
            (*log) << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " - "
                   << r.name << " (" << r.detail << ")\n";
        }
        (*log) << (out.all_pass ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
    }
    return out;
}

// The deterministic payload of a serialized report: everything except the
// metadata block.
inline std::string strip_metadata(const std::string& report_text) {
    Json j = io::parse_document(report_text);
    j.erase("metadata");
    return j.dump(2);
}

}  // namespace dc1lab::acceptance
