#include "proxima/experiments.hpp"

#include <doctest.h>

#include <sstream>
#include <stdexcept>

using namespace proxima;

namespace {

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("option validation")
{
    ExperimentOptions o;
    CHECK_NOTHROW(o.validate());
    o.byz = 1.5;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    CHECK_THROWS_AS(cmd_messages_table(o), std::invalid_argument);
    o = {};
    o.p_miss = -0.1;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.branching = 1;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.tau = 0.0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.n = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
    o = {};
    o.rounds = 0;
    CHECK_THROWS_AS(o.validate(), std::invalid_argument);
}

TEST_CASE("outputs are deterministic CSV")
{
    ExperimentOptions o;
    o.seeds = 3;
    o.samples = 200;
    const auto a = cmd_calibrate(o);
    const auto b = cmd_calibrate(o);
    CHECK(a.text == b.text);
    CHECK(a.text.rfind("row,seed,", 0) == 0);

    ExperimentOptions m;
    m.rounds = 2000;
    CHECK(cmd_moments(m).text == cmd_moments(m).text);
    CHECK(count_lines(cmd_moments(m).text) >= 4);
}

TEST_CASE("small-sample calibration warns")
{
    ExperimentOptions o;
    o.seeds = 1;
    o.samples = 50;
    CHECK_FALSE(cmd_calibrate(o).warnings.empty());
}

TEST_CASE("cross-shard and latency tables carry the reference values")
{
    const ExperimentOptions o;
    const auto cs = cmd_crossshard(o).text;
    CHECK(cs.find(",404000,4000,") != std::string::npos);
    CHECK(cs.find(",101000,1000,") != std::string::npos);
    CHECK(cs.find(",5052,52,") != std::string::npos);
    CHECK(cs.find(",50502,") != std::string::npos);
    const auto lat = cmd_latency(o).text;
    CHECK(lat.find("proxima_tree,100000,1,") != std::string::npos);
    CHECK(lat.find("hotstuff,100000,16,942,800,1742") != std::string::npos);
}

TEST_CASE("small messages table")
{
    ExperimentOptions o;
    o.n = 300;
    const auto t = cmd_messages_table(o).text;
    CHECK(t.find("hotstuff,300,") != std::string::npos);
    CHECK(t.find("proxima_tree,300,") != std::string::npos);
    CHECK(t.find("proxima_flat,300,") != std::string::npos);
}

TEST_CASE("simulated rounds at a small size")
{
    const auto flat = simulate_flat_round(300, 0.3, 0.37, 1);
    const auto tree = simulate_tree_round(300, 0.3, 0.37, 1, 10);
    CHECK(flat.finalized());
    CHECK(tree.finalized());
    CHECK(tree.metrics.messages < flat.metrics.messages);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(3501.5) == "3501.5");
}
