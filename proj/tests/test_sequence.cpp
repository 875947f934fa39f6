#include <catch2/catch_amalgamated.hpp>

#include "dc1lab/sequence.hpp"

using namespace dc1lab::systems;

TEST_CASE("prefix-periodic indexing and drop") {
    const PrefixPeriodic s({1, 0, 1}, {0});  // 101 then 0 forever
    REQUIRE(s.at(0) == 1);
    REQUIRE(s.at(1) == 0);
    REQUIRE(s.at(2) == 1);
    REQUIRE(s.at(3) == 0);
    REQUIRE(s.at(1000) == 0);

    const PrefixPeriodic d = s.drop(1);
    REQUIRE(d.at(0) == 0);
    REQUIRE(d.at(1) == 1);
    REQUIRE(d.at(2) == 0);

    const PrefixPeriodic cyc({}, {0, 1, 2});
    const PrefixPeriodic r = cyc.drop(4);
    for (uint64_t i = 0; i < 12; ++i) REQUIRE(r.at(i) == cyc.at(i + 4));
}

TEST_CASE("same_sequence is semantic, not structural") {
    REQUIRE(same_sequence(PrefixPeriodic({}, {0}), PrefixPeriodic({0, 0}, {0, 0})));
    REQUIRE(same_sequence(PrefixPeriodic({}, {0, 1}), PrefixPeriodic({0}, {1, 0})));
    REQUIRE(!same_sequence(PrefixPeriodic({}, {0, 1}), PrefixPeriodic({}, {1, 0})));
    REQUIRE(!same_sequence(PrefixPeriodic({1}, {0}), PrefixPeriodic({}, {0})));
}

TEST_CASE("block program alternates tracks at absolute indices") {
    BlockTracks bt;
    bt.phase_ends = {2, 5, 10};  // phases [0,2) [2,5) [5,10) [10,inf)
    bt.proximal = PrefixPeriodic::constant(0);
    bt.distal = PrefixPeriodic({}, {1, 2});  // time-aligned: at(i) = (i even ? 1 : 2)
    REQUIRE(bt.phase_of(0) == 1);
    REQUIRE(bt.phase_of(1) == 1);
    REQUIRE(bt.phase_of(2) == 2);
    REQUIRE(bt.phase_of(4) == 2);
    REQUIRE(bt.phase_of(5) == 3);
    REQUIRE(bt.phase_of(10) == 4);
    REQUIRE(bt.phase_of(1 << 20) == 4);

    const SymbolicSequence s(3, bt);
    REQUIRE(s.at(0) == 0);
    REQUIRE(s.at(2) == 1);   // distal phase, index 2 even
    REQUIRE(s.at(3) == 2);   // index 3 odd
    REQUIRE(s.at(4) == 1);
    REQUIRE(s.at(5) == 0);   // proximal again
    REQUIRE(s.at(10) == 1);  // distal forever, even index
    REQUIRE(s.at(11) == 2);
}

TEST_CASE("sequences validate symbols against the alphabet") {
    REQUIRE_THROWS_AS(SymbolicSequence(2, PrefixPeriodic({}, {2})),
                      dc1lab::precondition_error);
    REQUIRE_THROWS_AS(SymbolicSequence(1, PrefixPeriodic({}, {0})),
                      dc1lab::precondition_error);
}

TEST_CASE("first_disagreement with offsets") {
    const SymbolicSequence x(2, PrefixPeriodic({1, 0, 1}, {0}));
    const SymbolicSequence y = SymbolicSequence::constant(2, 0);
    REQUIRE(first_disagreement(x, 0, y, 0, 100) == 0);
    REQUIRE(first_disagreement(x, 1, y, 0, 100) == 1);  // x[1..]=01000..., y=000...
    REQUIRE(first_disagreement(x, 3, y, 0, 100) == std::nullopt);
}
