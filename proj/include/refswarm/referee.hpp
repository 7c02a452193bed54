#pragma once

#include <string>
#include <vector>

#include "refswarm/corpus.hpp"
#include "refswarm/graph.hpp"
#include "refswarm/swarm.hpp"

namespace refswarm {

// Where a manuscript's swarm starts: referenced authors found in the graph
// (with their citation multiplicity) plus the ones that could not be found.
struct SeedSet {
    SeedMultiset resolved;
    std::vector<AuthorKey> missing;  // distinct keys, sorted
};

// Resolves the manuscript's referenced authors against the graph.
// Throws NoSeedsError when none resolve (the manuscript cannot be ranked).
SeedSet build_seed_set(const ManuscriptRecord& manuscript,
                       const CoauthorGraph& graph);

struct RankingEntry {
    AuthorKey author;
    double raw_energy;  // > 0
    double membership;  // raw_energy / max raw_energy, in (0,1]
};

// Ranked candidate referees for one manuscript, energy descending with ties
// broken by author key. Carries the exact configuration that produced it.
struct RefereeRanking {
    std::string manuscript_id;
    SwarmConfig config;
    BlackoutConfig blackout;
    std::vector<AuthorKey> missing_references;
    std::vector<AuthorKey> authors_not_in_graph;  // blackout seeds skipped
    std::vector<RankingEntry> entries;
};

// The full pipeline: seed set -> positive swarm -> optional blackout ->
// membership normalization -> sorted entries (strictly positive energies
// only). Throws NoSeedsError / NoEnergyError as the stages do.
RefereeRanking rank_referees(const ManuscriptRecord& manuscript,
                             const CoauthorGraph& graph,
                             const SwarmConfig& config,
                             const BlackoutConfig& blackout = {});

// Hard-removes the manuscript's own authors from the ranking and
// re-normalizes the remaining memberships.
RefereeRanking exclude_authors(RefereeRanking ranking,
                               const ManuscriptRecord& manuscript);

// Single-line JSON export of a ranking (stable field and entry order, so
// identical inputs give identical bytes). The execution thread count is not
// part of the snapshot.
std::string ranking_to_json(const RefereeRanking& ranking);

}  // namespace refswarm
