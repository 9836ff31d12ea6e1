#include <doctest.h>

#include "support.hpp"
#include "topicnet/scheme.hpp"

using namespace topicnet;

TEST_CASE("scheme parsing and hierarchy lookups") {
    TopicScheme scheme = testsupport::pool_scheme();
    CHECK(scheme.contains("510"));
    CHECK(scheme.node("510").level == 2);
    CHECK(scheme.ancestor_at("510", 1) == "500");
    CHECK(scheme.ancestor_at("510", 2) == "510");
    CHECK(scheme.parent_class("510") == "500");
    CHECK(scheme.parent_class("500") == "500");
    CHECK(scheme.codes_at_level(1).size() == 4);
    CHECK(scheme.codes_at_level(2).size() == 16);
    CHECK_THROWS(scheme.node("999"));
    CHECK_THROWS(scheme.ancestor_at("500", 2));
    CHECK_THROWS(TopicScheme::from_json(R"([{"code":"a"},{"code":"a"}])"));
}

TEST_CASE("lexicon classifier sums votes and normalizes by the maximum") {
    LexiconClassifier classifier =
        LexiconClassifier::from_tsv("alpha\tT1\t1\nbeta\tT1\t1\ngamma\tT2\t1\n");
    auto single = classifier.classify({"alpha", "alpha"});
    CHECK(single == TopicDistribution{{"T1", 1.0}});

    auto two = classifier.classify({"alpha", "beta", "gamma"});
    CHECK(two.at("T1") == doctest::Approx(1.0));
    CHECK(two.at("T2") == doctest::Approx(0.5));

    CHECK(classifier.classify({"nothing", "matches"}).empty());
    CHECK(classifier.classify({}).empty());
}

TEST_CASE("lexicon classifier is invariant under uniform token duplication") {
    LexiconClassifier classifier =
        LexiconClassifier::from_tsv("alpha\tT1\t1\nbeta\tT2\t2\ngamma\tT3\t0.5\n");
    std::vector<std::string> text = {"alpha", "beta", "gamma", "beta"};
    std::vector<std::string> doubled;
    for (const auto& token : text) {
        doubled.push_back(token);
        doubled.push_back(token);
    }
    CHECK(classifier.classify(text) == classifier.classify(doubled));
}

TEST_CASE("lexicon validation") {
    CHECK_THROWS(LexiconClassifier::from_tsv(""));
    CHECK_THROWS(LexiconClassifier::from_tsv("a\tT1\t1\na\tT2\t1\n"));
    CHECK_THROWS(LexiconClassifier::from_tsv("a\tT1\t0\n"));
    CHECK_THROWS(LexiconClassifier::from_tsv("only_token\n"));
}

TEST_CASE("top_m_filter keeps the largest values above the mean") {
    CHECK(top_m_filter({{"t", 1.0}}, 5, 1.0) == TopicDistribution{{"t", 1.0}});
    CHECK(top_m_filter({{"t", 0.9}, {"u", 0.1}}, 5, 0.5) == TopicDistribution{{"t", 0.9}});

    TopicDistribution six = {{"a", 0.9}, {"b", 0.8}, {"c", 0.7}, {"d", 0.7},
                             {"e", 0.7}, {"f", 0.7}};
    auto kept = top_m_filter(six, 5, 0.5);
    CHECK(kept.size() == 5);
    CHECK(kept.count("f") == 0);  // tie at 0.7 resolved by code order
    CHECK(kept.count("e") == 1);
    CHECK_THROWS(top_m_filter(six, 0, 0.5));
}

TEST_CASE("top_m_filter output is a bounded subset above the mean") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        TopicDistribution d;
        std::size_t entries = rng.next_index(8);
        for (std::size_t i = 0; i < entries; ++i)
            d["t" + std::to_string(rng.next_index(10))] = 0.05 + rng.next_unit();
        double mean_value = rng.next_unit();
        std::size_t m_bot = 1 + rng.next_index(6);
        auto kept = top_m_filter(d, m_bot, mean_value);
        CHECK(kept.size() <= m_bot);
        for (const auto& [code, score] : kept) {
            CHECK(score >= mean_value);
            CHECK(d.at(code) == score);
        }
    }
}

TEST_CASE("membership_mean averages the distinct retained values") {
    std::vector<TopicDistribution> dists = {{{"a", 1.0}, {"b", 0.5}}, {{"c", 1.0}}};
    CHECK(membership_mean(dists) == doctest::Approx(0.75));  // {1.0, 0.5}
    CHECK(membership_mean({}) == 0.0);
}
