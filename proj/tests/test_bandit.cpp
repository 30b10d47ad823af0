#include <doctest.h>

#include <cmath>

#include "bai/bandit.hpp"
#include "bai/errors.hpp"
#include "bai/rng.hpp"

using namespace bai;

TEST_CASE("instance validation")
{
    CHECK_THROWS_AS(BanditInstance({}), ContractError);
    CHECK_THROWS_AS(BanditInstance({0.5, 1.1}), ContractError);
    CHECK_THROWS_AS(BanditInstance({-0.1, 0.5}), ContractError);
    CHECK_THROWS_AS(BanditInstance({0.5, std::nan("")}), ContractError);
    const BanditInstance one({0.3});
    CHECK(one.arms() == 1);
    CHECK(one.best_mean() == 0.3);
    const BanditInstance edge({0.0, 1.0});
    CHECK(edge.best_mean() == 1.0);
    CHECK_THROWS_AS(edge.mean(2), ContractError);
}

TEST_CASE("instance literal parsing")
{
    const BanditInstance inst = parse_instance_literal("[0.5, 0.4, 0.3]");
    REQUIRE(inst.arms() == 3);
    CHECK(inst.mean(1) == 0.4);
    CHECK_THROWS_AS(parse_instance_literal("[0.5, 0.4"), ValidationError);
    CHECK_THROWS_AS(parse_instance_literal("{\"a\": 1}"), ValidationError);
    CHECK_THROWS_AS(parse_instance_literal("[0.5, \"x\"]"), ValidationError);
    CHECK_THROWS_AS(parse_instance_literal("[]"), ValidationError);
    CHECK_THROWS_AS(parse_instance_literal("[0.5, 2]"), ValidationError);
}

TEST_CASE("best arm set and gaps")
{
    const BanditInstance inst({0.3, 0.5, 0.5, 0.1});
    CHECK(best_arm_set(inst) == std::vector<Arm>{1, 2});
    const auto g = gaps(inst);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == doctest::Approx(0.2));
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
    CHECK(g[3] == doctest::Approx(0.4));
}

TEST_CASE("sampling reads the arm's own stream")
{
    const BanditInstance inst({0.0, 1.0});
    RngStream s(3, 0);
    CHECK(sample_arm(inst, 0, s) == 0);
    CHECK(sample_arm(inst, 1, s) == 1);
    CHECK_THROWS_AS(sample_arm(inst, 2, s), ContractError);

    const BanditInstance half({0.5, 0.5});
    ArmStreams streams(half, 11);
    RngStream arm1(11, 1);
    for (int n = 0; n < 50; ++n)
        CHECK(streams.draw(1) == arm1.bernoulli(0.5));
}

TEST_CASE("run result total")
{
    RunResult r;
    r.pulls = {3, 4, 5};
    CHECK(r.total_pulls() == 12);
}
