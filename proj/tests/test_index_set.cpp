#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dc1lab/index_set.hpp"

using namespace dc1lab;
using namespace dc1lab::furstenberg;

namespace {

IndexSet random_set(std::mt19937_64& rng, uint64_t horizon, double density,
                    bool force_zero = true) {
    std::bernoulli_distribution coin(density);
    std::vector<uint64_t> m;
    if (force_zero) m.push_back(0);
    for (uint64_t i = 1; i < horizon; ++i)
        if (coin(rng)) m.push_back(i);
    return IndexSet(horizon, std::move(m));
}

}  // namespace

TEST_CASE("difference set examples") {
    REQUIRE(difference_set(IndexSet(10, {0, 2, 5})).members() ==
            std::vector<uint64_t>{0, 2, 3, 5});
    REQUIRE(difference_set(IndexSet(10, {0})).members() == std::vector<uint64_t>{0});
    std::vector<uint64_t> all;
    for (uint64_t i = 0; i < 10; ++i) all.push_back(i);
    REQUIRE(difference_set(IndexSet(10, all)).members() == all);
    REQUIRE_THROWS_AS(difference_set(IndexSet(10, {2, 5})), precondition_error);
}

TEST_CASE("difference set: sparse and dense paths agree") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const IndexSet a = random_set(rng, 700, trial % 2 ? 0.5 : 0.02);
        const IndexSet d = difference_set(a);
        // oracle: direct O(n^2) recomputation
        std::vector<bool> seen(700, false);
        for (uint64_t j : a.members())
            for (uint64_t k : a.members())
                if (j <= k) seen[k - j] = true;
        std::vector<uint64_t> expect;
        for (uint64_t i = 0; i < 700; ++i)
            if (seen[i]) expect.push_back(i);
        REQUIRE(d.members() == expect);
    }
}

TEST_CASE("gap and run statistics") {
    REQUIRE(max_gap(IndexSet(10, {0, 3, 6, 9})) == 3);
    REQUIRE(max_run(IndexSet(10, {0, 3, 6, 9})) == 1);
    std::vector<uint64_t> all;
    for (uint64_t i = 0; i < 10; ++i) all.push_back(i);
    REQUIRE(max_gap(IndexSet(10, all)) == 1);
    REQUIRE(max_run(IndexSet(10, all)) == 10);
    REQUIRE(max_gap(IndexSet(10, {5})) == 6);  // leading gap from -1
    REQUIRE(max_run(IndexSet(10, {5})) == 1);
    REQUIRE(!max_gap(IndexSet(10, {})).has_value());
    REQUIRE(max_run(IndexSet(10, {})) == 0);
}

TEST_CASE("family tests") {
    std::vector<uint64_t> mult3;
    for (uint64_t i = 0; i < 100; i += 3) mult3.push_back(i);
    mult3.push_back(50);  // extra member
    const auto frr = family_test(IndexSet(100, mult3), Frr{});
    REQUIRE(frr.status == FamilyStatus::In);
    REQUIRE(frr.witness == 3);

    const auto fs = family_test(IndexSet(100, mult3), Fs{});
    REQUIRE(fs.status == FamilyStatus::In);
    REQUIRE(fs.witness == 3);

    std::vector<uint64_t> block;
    for (uint64_t i = 10; i < 20; ++i) block.push_back(i);
    const auto ft = family_test(IndexSet(100, block), Ft{});
    REQUIRE(ft.status == FamilyStatus::In);
    REQUIRE(ft.witness == 10);
    const auto fs2 = family_test(IndexSet(100, block), Fs{});
    REQUIRE(fs2.status == FamilyStatus::Out);
    REQUIRE(*fs2.witness >= 80);

    REQUIRE(family_test(IndexSet(100, {}), Fs{}).status == FamilyStatus::Out);
    REQUIRE(family_test(IndexSet(100, {0}), Frr{uint64_t{7}}).status == FamilyStatus::Out);
}

TEST_CASE("duality examples") {
    std::vector<uint64_t> evens;
    for (uint64_t i = 0; i < 100; i += 2) evens.push_back(i);
    const auto d1 = duality_check(IndexSet(100, evens));
    REQUIRE(d1.run == 1);
    REQUIRE(d1.complement_gap == 2);
    REQUIRE(d1.pass());

    std::vector<uint64_t> half;
    for (uint64_t i = 0; i < 50; ++i) half.push_back(i);
    const auto d2 = duality_check(IndexSet(100, half));
    REQUIRE(d2.run == 50);
    REQUIRE(d2.complement_gap == 51);  // run + 1 under the declared convention
    REQUIRE(d2.pass());

    const auto d3 = duality_check(IndexSet(100, {}));
    REQUIRE(d3.run == 0);
    REQUIRE(d3.complement_gap == 1);
    REQUIRE(d3.pass());

    std::vector<uint64_t> full;
    for (uint64_t i = 0; i < 100; ++i) full.push_back(i);
    const auto d4 = duality_check(IndexSet(100, full));
    REQUIRE(d4.run == 100);
    REQUIRE(!d4.complement_gap.has_value());
    REQUIRE(d4.pass());
}

TEST_CASE("difference set properties on random sets") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const IndexSet b = random_set(rng, 512, 0.2);
        // subset A of B, still containing 0
        std::vector<uint64_t> am;
        std::bernoulli_distribution keep(0.6);
        for (uint64_t i : b.members())
            if (i == 0 || keep(rng)) am.push_back(i);
        const IndexSet a(512, std::move(am));

        const IndexSet da = difference_set(a);
        const IndexSet db = difference_set(b);
        REQUIRE(da.subset_of(db));  // monotone
        REQUIRE(da.contains(0));    // 0 always present
        REQUIRE(a.subset_of(da));   // A itself inside Delta(A) when 0 in A
    }
}

TEST_CASE("Frr IN implies the max_gap bound") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<uint64_t> kd(1, 9);
        const uint64_t k = kd(rng);
        std::vector<uint64_t> m;
        for (uint64_t i = 0; i < 400; i += k) m.push_back(i);
        std::bernoulli_distribution extra(0.1);
        for (uint64_t i = 0; i < 400; ++i)
            if (extra(rng)) m.push_back(i);
        const IndexSet a(400, std::move(m));
        const auto v = family_test(a, Frr{});
        REQUIRE(v.status == FamilyStatus::In);
        REQUIRE(*max_gap(a) <= *v.witness);
    }
}

TEST_CASE("random duality holds") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_real_distribution<double> dens(0.0, 1.0);
        const IndexSet a = random_set(rng, 300, dens(rng), trial % 3 == 0);
        REQUIRE(duality_check(a).pass());
    }
}
