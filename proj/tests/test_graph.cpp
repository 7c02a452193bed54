#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"

#include "refswarm/errors.hpp"
#include "refswarm/graph.hpp"
#include "refswarm/graph_io.hpp"
#include "refswarm/swarm.hpp"
#include "refswarm/synth.hpp"

using namespace refswarm;
using oracles::key;
using oracles::manuscript;

namespace {

double edge_weight(const CoauthorGraph& g, const char* a, const char* b) {
    const NodeId u = g.find(key(a));
    const NodeId v = g.find(key(b));
    REQUIRE(u != CoauthorGraph::npos);
    REQUIRE(v != CoauthorGraph::npos);
    const auto nbrs = g.neighbors(u);
    const auto raw = g.raw_weights(u);
    for (std::size_t e = 0; e < nbrs.size(); ++e)
        if (nbrs[e] == v) return raw[e];
    return 0.0;
}

}  // namespace

TEST_CASE("a two-author manuscript yields weight 1") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"a x", "b y"}));
    const CoauthorGraph g = build_graph(c);
    CHECK(g.node_count() == 2);
    CHECK(g.undirected_edge_count() == 1);
    CHECK(edge_weight(g, "a x", "b y") == 1.0);
}

TEST_CASE("a three-author manuscript splits weight 0.5 per pair") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"a x", "b y", "c z"}));
    const CoauthorGraph g = build_graph(c);
    CHECK(g.undirected_edge_count() == 3);
    CHECK(edge_weight(g, "a x", "b y") == 0.5);
    CHECK(edge_weight(g, "a x", "c z") == 0.5);
    CHECK(edge_weight(g, "b y", "c z") == 0.5);
}

TEST_CASE("repeat collaborations accumulate") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m1", {"a x", "b y"}));
    c.manuscripts.push_back(manuscript("m2", {"a x", "b y"}));
    const CoauthorGraph g = build_graph(c);
    CHECK(edge_weight(g, "a x", "b y") == 2.0);
}

TEST_CASE("single-author manuscripts contribute a node but no edges") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"solo author"}));
    const CoauthorGraph g = build_graph(c);
    CHECK(g.node_count() == 1);
    CHECK(g.undirected_edge_count() == 0);
    CHECK(g.degree(0) == 0);
}

TEST_CASE("referenced-only people do not become nodes") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"a x", "b y"}, {"ghost person"}));
    const CoauthorGraph g = build_graph(c);
    CHECK(g.node_count() == 2);
    CHECK(g.find(key("ghost person")) == CoauthorGraph::npos);
}

TEST_CASE("weights are symmetric and match the quadratic reference") {
    synth::RandomCorpusParams params;
    params.authors = 30;
    params.manuscripts = 60;
    params.max_team = 6;
    const Corpus c = synth::random_corpus(params, 3);
    const CoauthorGraph g = build_graph(c);

    const auto reference = oracles::naive_pair_weights(c);
    std::size_t counted = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto nbrs = g.neighbors(u);
        const auto raw = g.raw_weights(u);
        for (std::size_t e = 0; e < nbrs.size(); ++e) {
            const NodeId v = nbrs[e];
            CHECK(edge_weight(g, g.key_of(u).last.c_str(), g.key_of(v).last.c_str()) ==
                  edge_weight(g, g.key_of(v).last.c_str(), g.key_of(u).last.c_str()));
            if (u < v) {
                auto pair = std::minmax(g.key_of(u), g.key_of(v));
                REQUIRE(reference.contains(pair));
                CHECK(raw[e] == reference.at(pair));
                ++counted;
            }
        }
    }
    CHECK(counted == reference.size());
}

TEST_CASE("total raw weight equals sum of A(m)/2 over multi-author manuscripts") {
    synth::RandomCorpusParams params;
    params.authors = 40;
    params.manuscripts = 80;
    params.team_sizes = {1, 2, 3, 5, 9};  // dyadic 1/(A-1): sums are exact
    const Corpus c = synth::random_corpus(params, 5);
    const CoauthorGraph g = build_graph(c);

    double expected = 0.0;
    for (const auto& m : c.manuscripts)
        if (m.author_count() >= 2) expected += m.author_count() / 2.0;

    double total = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (double w : g.raw_weights(u)) total += w;
    CHECK(total / 2.0 == expected);
}

TEST_CASE("build_graph does not depend on manuscript order") {
    synth::RandomCorpusParams params;
    params.authors = 25;
    params.manuscripts = 50;
    params.max_team = 7;
    Corpus c = synth::random_corpus(params, 9);
    const CoauthorGraph g1 = build_graph(c);

    // deterministic shuffle
    ParticleRng rng(17, 0);
    for (std::size_t i = c.manuscripts.size(); i > 1; --i)
        std::swap(c.manuscripts[i - 1], c.manuscripts[rng.next() % i]);
    const CoauthorGraph g2 = build_graph(c);
    CHECK(g1 == g2);
}

TEST_CASE("normalize turns out-weights into a distribution") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m1", {"a x", "b y"}));
    c.manuscripts.push_back(manuscript("m2", {"a x", "b y"}));
    c.manuscripts.push_back(manuscript("m3", {"a x", "c z"}));
    c.manuscripts.push_back(manuscript("m4", {"a x", "c z"}));
    CoauthorGraph g = build_graph(c);
    g.normalize();

    const NodeId a = g.find(key("a x"));
    const auto probs = g.probabilities(a);  // out-weights {2, 2}
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] == 0.5);
    CHECK(probs[1] == 0.5);

    const NodeId b = g.find(key("b y"));  // single out-edge
    REQUIRE(g.probabilities(b).size() == 1);
    CHECK(g.probabilities(b)[0] == 1.0);
}

TEST_CASE("proportional normalization: {1,3} -> {0.25, 0.75}") {
    const CoauthorGraph g = oracles::graph_from_edges(3, {{0, 1, 1.0}, {0, 2, 3.0}});
    const auto probs = g.probabilities(0);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] == 0.25);
    CHECK(probs[1] == 0.75);
}

TEST_CASE("outgoing probabilities sum to 1 within 1e-9 on random graphs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const CoauthorGraph g = synth::random_connected_graph(60, 90, seed);
        for (NodeId n = 0; n < g.node_count(); ++n) {
            const auto probs = g.probabilities(n);
            if (probs.empty()) continue;
            const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("save/load round-trips the triangle graph exactly") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"a x", "b y", "c z"}));
    CoauthorGraph g = build_graph(c);
    g.normalize();
    std::stringstream buffer;
    save_graph(g, buffer);
    CHECK(load_graph(buffer) == g);
}

TEST_CASE("save/load round-trips a large random graph exactly") {
    CoauthorGraph g = synth::random_connected_graph(10'000, 30'000, 42);
    std::stringstream buffer;
    save_graph(g, buffer);
    CHECK(load_graph(buffer) == g);
}

TEST_CASE("loading an empty stream is a format error") {
    std::stringstream buffer;
    CHECK_THROWS_AS(load_graph(buffer), FormatError);
}

TEST_CASE("bad magic and truncation are distinguished") {
    CoauthorGraph g = synth::random_connected_graph(20, 10, 1);
    std::stringstream buffer;
    save_graph(g, buffer);
    const std::string bytes = buffer.str();

    std::stringstream bad_magic("XXXXXXXX" + bytes.substr(8));
    CHECK_THROWS_AS(load_graph(bad_magic), FormatError);

    std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(load_graph(truncated), CorruptionError);
}

TEST_CASE("saving an unnormalized graph is refused") {
    Corpus c;
    c.manuscripts.push_back(manuscript("m", {"a x", "b y"}));
    CoauthorGraph g = build_graph(c);
    std::stringstream buffer;
    CHECK_THROWS_AS(save_graph(g, buffer), std::logic_error);
}

TEST_CASE("neighborhood radius 0 is the seed set") {
    const CoauthorGraph g = oracles::graph_from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const std::vector<NodeId> seeds{0};
    CHECK(neighborhood(g, seeds, 0) == std::vector<NodeId>{0});
}

TEST_CASE("neighborhood on a path expands one hop per radius") {
    const CoauthorGraph g = oracles::graph_from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const std::vector<NodeId> seeds{0};
    CHECK(neighborhood(g, seeds, 1) == std::vector<NodeId>{0, 1});
    CHECK(neighborhood(g, seeds, 2) == std::vector<NodeId>{0, 1, 2});
}

TEST_CASE("star center reaches all leaves at radius 1") {
    const CoauthorGraph g = oracles::graph_from_edges(
        6, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}, {0, 5, 1.0}});
    const std::vector<NodeId> seeds{0};
    CHECK(neighborhood(g, seeds, 1) == std::vector<NodeId>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("neighborhood rejects unknown nodes") {
    const CoauthorGraph g = oracles::graph_from_edges(2, {{0, 1, 1.0}});
    const std::vector<NodeId> seeds{7};
    CHECK_THROWS_AS(neighborhood(g, seeds, 1), std::out_of_range);
}
