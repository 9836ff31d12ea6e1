#include <doctest.h>

#include <map>

#include "support.hpp"
#include "topicnet/induction.hpp"

using namespace topicnet;
using namespace testsupport;

namespace {

double vertex_weight(const TopicNetwork& t, const std::string& label) {
    auto v = t.graph.find_label(label);
    REQUIRE(v.has_value());
    return t.graph.vertex(*v).weight;
}

const LabeledDigraph::Arc* arc_of(const TopicNetwork& t, const std::string& src,
                                  const std::string& dst) {
    auto s = t.graph.find_id(src);
    auto d = t.graph.find_id(dst);
    if (!s || !d) return nullptr;
    return t.graph.find_arc(*s, *d);
}

struct ToyFixture {
    CorpusBundle bundle = toy_bundle();
    TopicScheme scheme = toy_scheme();
    LexiconClassifier classifier = toy_classifier();

    DefinitionalSetting setting() {
        return {&scheme, &classifier, &bundle.corpus, &bundle.history};
    }

    InductionConfig config() {
        InductionConfig cfg;
        cfg.reference = reference_stats(bundle.corpus, bundle.history);
        return cfg;
    }
};

bool same_graph(const LabeledDigraph& a, const LabeledDigraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.arc_count() != b.arc_count()) return false;
    for (std::size_t i = 0; i < a.vertex_count(); ++i) {
        if (a.vertex(i).id != b.vertex(i).id) return false;
        if (a.vertex(i).weight != b.vertex(i).weight) return false;  // bitwise
    }
    for (std::size_t i = 0; i < a.arc_count(); ++i) {
        if (a.vertex(a.arcs()[i].src).id != b.vertex(b.arcs()[i].src).id) return false;
        if (a.vertex(a.arcs()[i].dst).id != b.vertex(b.arcs()[i].dst).id) return false;
        if (a.arcs()[i].weight != b.arcs()[i].weight) return false;  // bitwise
    }
    return true;
}

}  // namespace

TEST_CASE("toy corpus classifications come out as designed") {
    ToyFixture fix;
    auto cc = classify_corpus(fix.setting(), fix.config());
    CHECK(cc.score_mean == doctest::Approx(0.75));
    CHECK(*cc.find("x1") == TopicDistribution{{"510", 1.0}});
    CHECK(*cc.find("x2") == TopicDistribution{{"620", 1.0}});
    CHECK(*cc.find("x3") == TopicDistribution{{"910", 1.0}});
    CHECK(*cc.find("x4") == TopicDistribution{{"910", 1.0}});
}

TEST_CASE("text topic network of the toy corpus") {
    ToyFixture fix;
    TopicNetwork ttn = induce_ttn(fix.setting(), fix.config());
    CHECK(ttn.graph.vertex_count() == 3);
    CHECK(vertex_weight(ttn, "510") == doctest::Approx(1.0));
    CHECK(vertex_weight(ttn, "620") == doctest::Approx(1.0));
    CHECK(vertex_weight(ttn, "910") == doctest::Approx(2.0));
    REQUIRE(arc_of(ttn, "510", "620") != nullptr);
    CHECK(arc_of(ttn, "510", "620")->weight == doctest::Approx(1.0));
    REQUIRE(arc_of(ttn, "910", "910") != nullptr);
    CHECK(arc_of(ttn, "910", "910")->weight == doctest::Approx(1.0));
    CHECK(ttn.graph.arc_count() == 2);
}

TEST_CASE("mutual links between same-topic texts double into one self-loop") {
    Corpus c = Corpus::from_json(R"({"texts":[
        {"id": "x", "tokens": ["tok_510"], "links": ["y"]},
        {"id": "y", "tokens": ["tok_510"], "links": ["x"]}]})");
    EditHistory h;
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &c, &h};
    TopicNetwork ttn = induce_ttn(setting, InductionConfig{});
    CHECK(ttn.graph.vertex_count() == 1);
    CHECK(arc_of(ttn, "510", "510")->weight == doctest::Approx(2.0));
}

TEST_CASE("corpus without hyperlinks yields an arc-free network") {
    Corpus c = Corpus::from_json(R"({"texts":[
        {"id": "x", "tokens": ["tok_510"]},
        {"id": "y", "tokens": ["tok_620"]}]})");
    EditHistory h;
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &c, &h};
    TopicNetwork ttn = induce_ttn(setting, InductionConfig{});
    CHECK(ttn.graph.vertex_count() == 2);
    CHECK(ttn.graph.arc_count() == 0);
}

TEST_CASE("level-1 induction aggregates codes into their top classes") {
    ToyFixture fix;
    InductionConfig cfg = fix.config();
    cfg.level = 1;
    TopicNetwork ttn = induce_ttn(fix.setting(), cfg);
    CHECK(ttn.graph.find_label("500").has_value());
    CHECK(ttn.graph.find_label("900").has_value());
    CHECK(vertex_weight(ttn, "900") == doctest::Approx(2.0));
}

TEST_CASE("author network keeps the vertex set and shrinks the arc set") {
    ToyFixture fix;
    TopicNetwork ttn = induce_ttn(fix.setting(), fix.config());
    TopicNetwork atn = induce_atn(fix.setting(), ttn, fix.config());
    REQUIRE(atn.graph.vertex_count() == ttn.graph.vertex_count());
    for (const auto& v : ttn.graph.vertices()) CHECK(atn.graph.find_label(v.label).has_value());
    for (const auto& a : atn.graph.arcs()) {
        auto src = ttn.graph.find_id(atn.graph.vertex(a.src).id);
        auto dst = ttn.graph.find_id(atn.graph.vertex(a.dst).id);
        REQUIRE(src.has_value());
        REQUIRE(dst.has_value());
        CHECK(ttn.graph.find_arc(*src, *dst) != nullptr);
        CHECK(a.weight > 0.0);
    }
    EditHistory empty;
    DefinitionalSetting no_history{&fix.scheme, &fix.classifier, &fix.bundle.corpus, &empty};
    CHECK_THROWS(induce_atn(no_history, ttn, fix.config()));
}

TEST_CASE("calibration point: average behavior reproduces the text network") {
    CalibrationFixture fixture = calibration_fixture();
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &fixture.bundle.corpus,
                                &fixture.bundle.history};
    InductionConfig cfg;
    cfg.reference = fixture.reference;

    TopicNetwork ttn = induce_ttn(setting, cfg);
    TopicNetwork atn = induce_atn(setting, ttn, cfg);
    REQUIRE(atn.graph.vertex_count() == ttn.graph.vertex_count());
    REQUIRE(atn.graph.arc_count() == ttn.graph.arc_count());
    for (const auto& v : ttn.graph.vertices()) {
        auto w = atn.graph.find_label(v.label);
        REQUIRE(w.has_value());
        CHECK(atn.graph.vertex(*w).weight == doctest::Approx(v.weight).epsilon(1e-9));
    }
    for (const auto& a : ttn.graph.arcs()) {
        const auto* b = arc_of(atn, ttn.graph.vertex(a.src).id, ttn.graph.vertex(a.dst).id);
        REQUIRE(b != nullptr);
        CHECK(b->weight == doctest::Approx(a.weight).epsilon(1e-9));
    }
}

TEST_CASE("raising one author's activity above the mean never lowers topic weights") {
    CalibrationFixture fixture = calibration_fixture(10, 3, 5.0);
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &fixture.bundle.corpus,
                                &fixture.bundle.history};
    InductionConfig cfg;
    cfg.reference = fixture.reference;
    TopicNetwork ttn = induce_ttn(setting, cfg);
    TopicNetwork base = induce_atn(setting, ttn, cfg);

    // Same corpus with author0 boosted on every text.
    std::vector<Revision> revisions = fixture.bundle.history.revisions();
    for (auto& r : revisions)
        if (r.author == "author0") r.bytes_added *= 3.0;
    EditHistory boosted(revisions);
    DefinitionalSetting boosted_setting{&scheme, &classifier, &fixture.bundle.corpus, &boosted};
    TopicNetwork boosted_atn = induce_atn(boosted_setting, ttn, cfg);

    for (const auto& v : base.graph.vertices()) {
        auto w = boosted_atn.graph.find_label(v.label);
        REQUIRE(w.has_value());
        CHECK(boosted_atn.graph.vertex(*w).weight >= v.weight - 1e-9);
    }
}

TEST_CASE("word network weights count shared vocabulary") {
    ToyFixture fix;
    TopicNetwork ttn = induce_ttn(fix.setting(), fix.config());
    TopicNetwork wtn = induce_wtn(fix.setting(), ttn, fix.config());
    // x1 and x2 share {w1, w2}: two tokens, each contributing 1*1*(1+1).
    REQUIRE(arc_of(wtn, "510", "620") != nullptr);
    CHECK(arc_of(wtn, "510", "620")->weight == doctest::Approx(4.0));
    // x3 and x4 share no token: the reflexive 910 link vanishes.
    CHECK(arc_of(wtn, "910", "910") == nullptr);
    // Vertex weights stay those of the text network.
    for (const auto& v : ttn.graph.vertices())
        CHECK(vertex_weight(wtn, v.label) == doctest::Approx(v.weight));
}

TEST_CASE("identical linked texts contribute twice per shared token") {
    Corpus c = Corpus::from_json(R"({"texts":[
        {"id": "x", "tokens": ["tok_510", "other1", "other2"], "links": ["y"]},
        {"id": "y", "tokens": ["tok_510", "other1", "other2"], "links": []}]})");
    EditHistory h;
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &c, &h};
    TopicNetwork ttn = induce_ttn(setting, InductionConfig{});
    TopicNetwork wtn = induce_wtn(setting, ttn, InductionConfig{});
    // Three shared tokens, value 2 each.
    CHECK(arc_of(wtn, "510", "510")->weight == doctest::Approx(6.0));
}

TEST_CASE("generic engine with the dedicated combinator packs is bit-identical") {
    ToyFixture fix;
    InductionConfig cfg = fix.config();
    TopicNetwork ttn = induce_ttn(fix.setting(), cfg);
    TopicNetwork generic_ttn = induce_generic(fix.setting(), cfg, module3_ttn_combinators());
    CHECK(same_graph(ttn.graph, generic_ttn.graph));

    TopicNetwork atn = induce_atn(fix.setting(), ttn, cfg);
    AuxLayer authors = AuxLayer::from_author_layer(
        build_author_layer(fix.bundle.corpus, fix.bundle.history), fix.bundle.history,
        fix.bundle.corpus);
    TopicNetwork generic_atn = induce_generic(
        fix.setting(), cfg, module3_atn_combinators(fix.bundle.history, cfg.reference, cfg.p),
        &authors);
    CHECK(same_graph(atn.graph, generic_atn.graph));

    TopicNetwork wtn = induce_wtn(fix.setting(), ttn, cfg);
    AuxLayer words = AuxLayer::from_word_layer(fix.bundle.corpus);
    TopicNetwork generic_wtn =
        induce_generic(fix.setting(), cfg, module3_wtn_combinators(), &words);
    CHECK(same_graph(wtn.graph, generic_wtn.graph));

    CalibrationFixture fixture = calibration_fixture(12, 3, 4.0);
    TopicScheme scheme = pool_scheme();
    LexiconClassifier classifier = pool_classifier();
    DefinitionalSetting setting{&scheme, &classifier, &fixture.bundle.corpus,
                                &fixture.bundle.history};
    InductionConfig cal_cfg;
    cal_cfg.reference = fixture.reference;
    TopicNetwork cal_ttn = induce_ttn(setting, cal_cfg);
    TopicNetwork cal_atn = induce_atn(setting, cal_ttn, cal_cfg);
    AuxLayer cal_aux = AuxLayer::from_author_layer(
        build_author_layer(fixture.bundle.corpus, fixture.bundle.history),
        fixture.bundle.history, fixture.bundle.corpus);
    TopicNetwork cal_generic = induce_generic(
        setting, cal_cfg,
        module3_atn_combinators(fixture.bundle.history, cal_cfg.reference, cal_cfg.p), &cal_aux);
    CHECK(same_graph(cal_atn.graph, cal_generic.graph));
}

TEST_CASE("toy evidence combination with an explicit author relation") {
    // Author pairs (a1, a2) and (a3, a4) with unit relation weight; the
    // combination multiplies the evidence and adds the relation weights.
    ToyFixture fix;
    InductionConfig cfg = fix.config();
    AuxLayer aux;
    aux.units = {"a1", "a2", "a3", "a4"};
    aux.arcs = {{"a1", "a2", 1.0}, {"a3", "a4", 1.0}};
    aux.margin["x1"] = {{"a1", 1.0}, {"a2", 1.0}};
    aux.margin["x2"] = {{"a1", 1.0}, {"a2", 1.0}};
    aux.margin["x3"] = {{"a3", 1.0}, {"a4", 1.0}};
    aux.margin["x4"] = {{"a3", 1.0}, {"a4", 1.0}};

    GenericCombinators toy;
    toy.vertex_term = [](double theta, const std::string&, const std::string&, double margin) {
        return theta * margin;
    };
    toy.arc_term = [](double theta_x, double theta_y, const std::string&, const std::string&,
                      const std::string&, const std::string&, double margin_rx, double margin_sy,
                      double relation, double link) {
        return theta_x * theta_y * margin_rx * margin_sy * (relation + link);
    };
    TopicNetwork net = induce_generic(fix.setting(), cfg, toy, &aux);
    CHECK(arc_of(net, "510", "620")->weight == doctest::Approx(2.0));
    CHECK(arc_of(net, "910", "910")->weight == doctest::Approx(2.0));

    GenericCombinators zero;
    zero.vertex_term = [](double, const std::string&, const std::string&, double) { return 0.0; };
    zero.arc_term = [](double, double, const std::string&, const std::string&,
                       const std::string&, const std::string&, double, double, double, double) {
        return 0.0;
    };
    TopicNetwork empty = induce_generic(fix.setting(), cfg, zero, &aux);
    CHECK(empty.graph.vertex_count() == 0);
    CHECK(empty.graph.arc_count() == 0);

    GenericCombinators invalid;
    invalid.vertex_term = [](double, const std::string&, const std::string&, double) {
        return -1.0;
    };
    CHECK_THROWS(induce_generic(fix.setting(), cfg, invalid, &aux));
}

TEST_CASE("undirected derivation merges antiparallel arcs") {
    TopicNetwork t = make_network({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}},
                                  {{"a", "b", 2.0}, {"b", "a", 4.0}, {"b", "c", 5.0},
                                   {"c", "c", 7.0}});
    TopicNetwork u = to_undirected(t);
    CHECK(u.undirected);
    const auto* ab = arc_of(u, "a", "b");
    const auto* ba = arc_of(u, "b", "a");
    REQUIRE(ab != nullptr);
    REQUIRE(ba != nullptr);
    CHECK(ab->weight == doctest::Approx(3.0));
    CHECK(ba->weight == doctest::Approx(3.0));
    CHECK(arc_of(u, "b", "c")->weight == doctest::Approx(5.0));
    CHECK(arc_of(u, "c", "b")->weight == doctest::Approx(5.0));
    CHECK(arc_of(u, "c", "c")->weight == doctest::Approx(7.0));

    TopicNetwork bare = make_network({{"a", 1.0}}, {});
    CHECK(to_undirected(bare).graph.arc_count() == 0);
}

TEST_CASE("multiplex bundling creates margin arcs for shared labels") {
    TopicNetwork a = make_network({{"510", 1.0}, {"620", 2.0}}, {{"510", "620", 1.0}}, "c1");
    TopicNetwork b = make_network({{"510", 3.0}, {"910", 1.0}}, {{"510", "910", 1.0}}, "c1");
    auto mtn = build_mtn({a, b});
    REQUIRE(mtn.layers.size() == 2);
    CHECK(mtn.margins.size() == 2);  // 510 in both directions

    auto single = build_mtn({a});
    CHECK(single.margins.empty());

    TopicNetwork disjoint = make_network({{"730", 1.0}}, {}, "c2");
    auto none = build_mtn({a, disjoint});
    CHECK(none.margins.empty());

    TopicScheme scheme = pool_scheme();
    TopicNetwork alien = make_network({{"999", 1.0}}, {}, "c3");
    CHECK_THROWS(build_mtn({a, alien}, &scheme));
    CHECK_NOTHROW(build_mtn({a, b}, &scheme));
}

TEST_CASE("topic network json round-trip keeps structure and provenance") {
    ToyFixture fix;
    TopicNetwork ttn = induce_ttn(fix.setting(), fix.config());
    ttn.corpus_id = "toy";
    std::string serialized = topic_network_to_json(ttn);
    TopicNetwork back = topic_network_from_json(serialized);
    CHECK(same_graph(ttn.graph, back.graph));
    CHECK(back.mode == TopicNetworkMode::kTtn);
    CHECK(back.corpus_id == "toy");
    CHECK(back.config_digest == ttn.config_digest);
}
