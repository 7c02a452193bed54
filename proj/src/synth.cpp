#include "refswarm/synth.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "refswarm/swarm.hpp"

namespace refswarm::synth {

namespace {

// Small deterministic helper on top of the particle rng; identical output
// on every platform, unlike <random> distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : rng_(seed, 0x73796e7468ull) {}

    std::uint64_t next() { return rng_.next(); }
    int below(int bound) {
        return static_cast<int>(next() % static_cast<std::uint64_t>(bound));
    }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); }
    double unit() { return rng_.next_unit(); }

    std::vector<int> pick_distinct(int count, int universe) {
        if (count > universe)
            throw std::invalid_argument("cannot pick more values than exist");
        std::unordered_set<int> seen;
        std::vector<int> out;
        while (static_cast<int>(out.size()) < count) {
            const int candidate = below(universe);
            if (seen.insert(candidate).second) out.push_back(candidate);
        }
        return out;
    }

private:
    ParticleRng rng_;
};

AuthorKey key(const std::string& name) { return normalize_author_name(name); }

std::string tag(const char* prefix, int i) {
    return std::string(prefix) + std::to_string(i);
}

}  // namespace

Corpus random_corpus(const RandomCorpusParams& params, std::uint64_t seed) {
    if (params.authors < 1 || params.manuscripts < 0)
        throw std::invalid_argument("bad random corpus parameters");
    Rng rng(seed);
    Corpus corpus;
    for (int m = 0; m < params.manuscripts; ++m) {
        ManuscriptRecord rec;
        rec.id = tag("m", m);
        const int team = params.team_sizes.empty()
                             ? rng.range(params.min_team, params.max_team)
                             : params.team_sizes[static_cast<std::size_t>(
                                   rng.below(static_cast<int>(params.team_sizes.size())))];
        for (int a : rng.pick_distinct(std::min(team, params.authors), params.authors))
            rec.authors.push_back(key(tag("p", a)));
        const int refs = params.max_references > 0 ? rng.below(params.max_references + 1) : 0;
        for (int r = 0; r < refs; ++r)
            rec.referenced_authors.push_back(key(tag("p", rng.below(params.authors))));
        corpus.manuscripts.push_back(std::move(rec));
    }
    return corpus;
}

CoauthorGraph random_connected_graph(int nodes, int extra_edges,
                                     std::uint64_t seed) {
    if (nodes < 1) throw std::invalid_argument("nodes must be >= 1");
    Rng rng(seed);
    std::vector<AuthorKey> keys;
    keys.reserve(static_cast<std::size_t>(nodes));
    for (int i = 0; i < nodes; ++i) keys.push_back(key(tag("n", i)));

    std::unordered_set<std::uint64_t> used;
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    auto add_edge = [&](NodeId u, NodeId v) {
        const auto lo = std::min(u, v), hi = std::max(u, v);
        if (lo == hi) return false;
        if (!used.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second)
            return false;
        edges.emplace_back(lo, hi, 0.5 + 1.5 * rng.unit());
        return true;
    };
    for (int i = 1; i < nodes; ++i)
        add_edge(static_cast<NodeId>(i), static_cast<NodeId>(rng.below(i)));
    for (int i = 0; i < extra_edges && nodes > 2; ++i)
        add_edge(static_cast<NodeId>(rng.below(nodes)),
                 static_cast<NodeId>(rng.below(nodes)));

    CoauthorGraph g = CoauthorGraph::from_edges(std::move(keys), edges);
    g.normalize();
    return g;
}

CoauthorGraph uniform_random_graph(std::size_t nodes, std::size_t edges,
                                   std::uint64_t seed) {
    if (nodes < 2 || edges > nodes * (nodes - 1) / 2)
        throw std::invalid_argument("edge count not achievable");
    Rng rng(seed);
    std::vector<AuthorKey> keys;
    keys.reserve(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        keys.push_back(key(tag("n", static_cast<int>(i))));

    std::unordered_set<std::uint64_t> used;
    used.reserve(edges * 2);
    std::vector<std::tuple<NodeId, NodeId, double>> edge_list;
    edge_list.reserve(edges);
    while (edge_list.size() < edges) {
        const auto u = static_cast<NodeId>(rng.next() % nodes);
        const auto v = static_cast<NodeId>(rng.next() % nodes);
        const auto lo = std::min(u, v), hi = std::max(u, v);
        if (lo == hi) continue;
        if (!used.insert((static_cast<std::uint64_t>(lo) << 32) | hi).second)
            continue;
        edge_list.emplace_back(lo, hi, 0.5 + 1.5 * rng.unit());
    }
    CoauthorGraph g = CoauthorGraph::from_edges(std::move(keys), edge_list);
    g.normalize();
    return g;
}

PlantedBundle planted_community(const PlantedParams& params) {
    if (params.field_authors < params.refs_per_submission)
        throw std::invalid_argument("need at least refs_per_submission field authors");
    Rng rng(params.seed);
    PlantedBundle bundle;
    auto& background = bundle.background.manuscripts;

    // Field community: random small collaborations.
    for (int p = 0; p < params.field_papers; ++p) {
        ManuscriptRecord rec;
        rec.id = tag("bg-field-", p);
        for (int a : rng.pick_distinct(rng.range(2, 3), params.field_authors))
            rec.authors.push_back(key(tag("f", a)));
        background.push_back(std::move(rec));
    }
    // Experts co-author with the field.
    for (int e = 0; e < params.experts; ++e) {
        for (int p = 0; p < 2; ++p) {
            ManuscriptRecord rec;
            rec.id = tag("bg-expert-", e * 2 + p);
            rec.authors.push_back(key(tag("e", e)));
            for (int a : rng.pick_distinct(2, params.field_authors))
                rec.authors.push_back(key(tag("f", a)));
            background.push_back(std::move(rec));
        }
    }
    // Remote cluster of non-experts, plus two thin bridges into the field so
    // a little energy still reaches them.
    for (int x = 0; x < params.non_experts; ++x) {
        ManuscriptRecord rec;
        rec.id = tag("bg-remote-", x);
        rec.authors.push_back(key(tag("x", x)));
        rec.authors.push_back(key(tag("x", (x + 1) % params.non_experts)));
        background.push_back(std::move(rec));
    }
    for (int b = 0; b < 2 && b < params.non_experts; ++b) {
        ManuscriptRecord rec;
        rec.id = tag("bg-bridge-", b);
        rec.authors.push_back(key(tag("x", b)));
        rec.authors.push_back(key(tag("f", b)));
        background.push_back(std::move(rec));
    }
    // Each submission author's sole collaboration is with their conflicted
    // PC member, so the pair sits in its own corner of the graph.
    for (int s = 0; s < params.submissions; ++s) {
        ManuscriptRecord rec;
        rec.id = tag("bg-pair-", s);
        rec.authors.push_back(key(tag("a", s)));
        rec.authors.push_back(key(tag("c", s)));
        background.push_back(std::move(rec));
    }

    // Submissions reference field authors plus the submitting author
    // themself (twice: self-citation is what drags energy onto the
    // conflicted neighborhood).
    for (int s = 0; s < params.submissions; ++s) {
        ManuscriptRecord rec;
        rec.id = tag("sub-", s);
        rec.authors.push_back(key(tag("a", s)));
        for (int a : rng.pick_distinct(params.refs_per_submission, params.field_authors))
            rec.referenced_authors.push_back(key(tag("f", a)));
        rec.referenced_authors.push_back(key(tag("a", s)));
        rec.referenced_authors.push_back(key(tag("a", s)));
        bundle.submissions.manuscripts.push_back(std::move(rec));
    }

    // Every PC member bids on every submission. Experts alternate between
    // codes 1 and 2 so the two categories draw from the same population.
    for (int s = 0; s < params.submissions; ++s) {
        const std::string sub_id = tag("sub-", s);
        for (int e = 0; e < params.experts; ++e)
            bundle.bids.push_back({key(tag("e", e)), sub_id,
                                   (e + s) % 2 == 0 ? BidCode::expert_wants_review
                                                    : BidCode::expert});
        for (int x = 0; x < params.non_experts; ++x)
            bundle.bids.push_back({key(tag("x", x)), sub_id, BidCode::non_expert});
        for (int c = 0; c < params.submissions; ++c)
            bundle.bids.push_back({key(tag("c", c)), sub_id,
                                   c == s ? BidCode::conflict : BidCode::non_expert});
    }
    return bundle;
}

}  // namespace refswarm::synth
