#pragma once

#include <cstdint>
#include <vector>

#include "refswarm/corpus.hpp"
#include "refswarm/eval.hpp"
#include "refswarm/graph.hpp"

namespace refswarm::synth {

// Deterministic generators used by the CLI demo flow, the test suites and
// the benchmarks. All of them are pure functions of their parameters.

struct RandomCorpusParams {
    int authors = 100;
    int manuscripts = 50;
    int min_team = 1;
    int max_team = 5;
    int max_references = 8;
    // When non-empty, team sizes are drawn from this list instead of
    // [min_team, max_team].
    std::vector<int> team_sizes;
};

Corpus random_corpus(const RandomCorpusParams& params, std::uint64_t seed);

// Connected undirected graph: random spanning tree plus extra random edges,
// uniform-ish raw weights. Returned normalized.
CoauthorGraph random_connected_graph(int nodes, int extra_edges,
                                     std::uint64_t seed);

// Large uniform random graph for benchmarks (normalized).
CoauthorGraph uniform_random_graph(std::size_t nodes, std::size_t edges,
                                   std::uint64_t seed);

// A corpus + submissions + bids bundle with planted structure:
//  - a collaborating "field" community that submissions reference,
//  - expert PC members co-authoring inside the field (bid 1 or 2),
//  - a remote PC cluster weakly bridged to the field (bid 3),
//  - one submission author per submission who cites themself and whose only
//    co-author is a dedicated conflicted PC member (bid 4 on that
//    submission).
// Expert energies should dwarf non-expert ones, and the conflicted members
// sit inside the 1-neighborhood of the submission authors, where a blackout
// swarm cancels them.
struct PlantedParams {
    int field_authors = 60;
    int field_papers = 150;
    int experts = 20;
    int non_experts = 20;
    int submissions = 40;
    int refs_per_submission = 6;
    std::uint64_t seed = 1;
};

struct PlantedBundle {
    Corpus background;   // feeds build_graph
    Corpus submissions;  // manuscripts to rank
    std::vector<BidRecord> bids;
};

PlantedBundle planted_community(const PlantedParams& params);

}  // namespace refswarm::synth
