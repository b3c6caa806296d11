#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracle.hpp"

TEST_SUITE("oracle")
{
    TEST_CASE("figure 1 enumeration")
    {
        const auto lex = fixtures::oracle_lexicon("fig1.lex");
        const auto all = oracle::enumerate_wellformed(lex, {5, 5});
        const oracle::Seq worked{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {3, 1}};
        CHECK(std::find(all.begin(), all.end(), worked) != all.end());
        CHECK(all.size() == 5u);
        CHECK(oracle::evaluate(lex, worked) == "what did you see");
    }

    TEST_CASE("length one gives the bare categories")
    {
        const auto lex = fixtures::oracle_lexicon("move2.lex");
        const auto one = oracle::enumerate_wellformed(lex, {1, 1});
        CHECK(one == std::vector<oracle::Seq>{{{3, 2}}}); // it :: d
        const auto fig = oracle::enumerate_wellformed(fixtures::oracle_lexicon("fig1.lex"), {1, 1});
        CHECK(fig == std::vector<oracle::Seq>{{{3, 0}}}); // you :: d
    }

    TEST_CASE("exact posteriors")
    {
        const auto fig = fixtures::oracle_lexicon("fig1.lex");
        const auto p = oracle::exact_posterior(fig, {{1}, {1}, {1}, {0.5, 0.5}}, "what did you see", "c", {5, 2});
        REQUIRE(p.size() == 1);
        CHECK(p[0].second == 1.0);

        const auto amb = fixtures::oracle_lexicon("ambiguous.lex");
        const std::vector<std::vector<double>> uniform{{0.5, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
        const auto q = oracle::exact_posterior(amb, uniform, "fish", "c", {4, 2});
        REQUIRE(q.size() == 2);
        CHECK(q[0].second == doctest::Approx(0.5));
        CHECK(q[1].second == doctest::Approx(0.5));

        CHECK_THROWS_AS(oracle::exact_posterior(fig, {{1}, {1}, {1}, {0.5, 0.5}}, "you see", "c", {5, 2}),
                        oracle::EmptySupport);
    }

    TEST_CASE("budget")
    {
        const auto lex = fixtures::oracle_lexicon("fig1.lex");
        CHECK_THROWS_AS(oracle::enumerate_wellformed(lex, {5, 5, 100}), oracle::BudgetExceeded);
    }
}
