#include "refswarm/referee.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

#include "refswarm/errors.hpp"

namespace refswarm {

SeedSet build_seed_set(const ManuscriptRecord& manuscript,
                       const CoauthorGraph& graph) {
    SeedSet seeds;
    std::set<AuthorKey> missing;
    for (const AuthorKey& ref : manuscript.referenced_authors) {
        const NodeId node = graph.find(ref);
        if (node == CoauthorGraph::npos)
            missing.insert(ref);
        else
            ++seeds.resolved[node];
    }
    seeds.missing.assign(missing.begin(), missing.end());
    if (seeds.resolved.empty())
        throw NoSeedsError("manuscript '" + manuscript.id +
                           "' has no referenced authors in the graph");
    return seeds;
}

namespace {

std::vector<RankingEntry> to_entries(const EnergyVector& energies,
                                     const CoauthorGraph& graph) {
    const EnergyVector memberships = normalize_energy(energies);
    std::vector<RankingEntry> entries;
    entries.reserve(energies.size());
    for (const auto& [node, raw] : energies.sorted_entries())
        if (raw > 0.0)
            entries.push_back({graph.key_of(node), raw, memberships.at(node)});
    std::sort(entries.begin(), entries.end(),
              [](const RankingEntry& a, const RankingEntry& b) {
                  if (a.raw_energy != b.raw_energy)
                      return a.raw_energy > b.raw_energy;
                  return a.author < b.author;
              });
    return entries;
}

}  // namespace

RefereeRanking rank_referees(const ManuscriptRecord& manuscript,
                             const CoauthorGraph& graph,
                             const SwarmConfig& config,
                             const BlackoutConfig& blackout) {
    config.validate();

    RefereeRanking ranking;
    ranking.manuscript_id = manuscript.id;
    ranking.config = config;
    // A zero-step blackout is the no-blackout pipeline; snapshot it as such
    // so equivalent runs export identical bytes.
    ranking.blackout = (blackout.enabled && blackout.blackout_steps > 0)
                           ? blackout
                           : BlackoutConfig{};

    SeedSet seeds = build_seed_set(manuscript, graph);
    ranking.missing_references = std::move(seeds.missing);

    EnergyVector energies =
        config.mode == PropagationMode::expectation
            ? propagate_expectation(seeds.resolved, graph, config)
            : propagate(seed_particles(seeds.resolved, config), graph, config);

    if (blackout.enabled && blackout.blackout_steps > 0) {
        std::vector<NodeId> author_nodes;
        for (const AuthorKey& author : manuscript.authors) {
            const NodeId node = graph.find(author);
            if (node == CoauthorGraph::npos)
                ranking.authors_not_in_graph.push_back(author);
            else
                author_nodes.push_back(node);
        }
        std::sort(ranking.authors_not_in_graph.begin(),
                  ranking.authors_not_in_graph.end());
        energies = apply_blackout(energies, author_nodes, blackout, graph, config);
    }

    ranking.entries = to_entries(energies, graph);
    return ranking;
}

RefereeRanking exclude_authors(RefereeRanking ranking,
                               const ManuscriptRecord& manuscript) {
    const std::set<AuthorKey> own(manuscript.authors.begin(),
                                  manuscript.authors.end());
    std::erase_if(ranking.entries, [&](const RankingEntry& e) {
        return own.contains(e.author);
    });
    if (!ranking.entries.empty()) {
        const double max = ranking.entries.front().raw_energy;  // sorted desc
        for (RankingEntry& e : ranking.entries) e.membership = e.raw_energy / max;
    }
    return ranking;
}

std::string ranking_to_json(const RefereeRanking& ranking) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["manuscript_id"] = ranking.manuscript_id;

    ordered_json config;
    config["particles_per_reference"] = ranking.config.particles_per_reference;
    config["initial_energy"] = ranking.config.initial_energy;
    config["decay"] = ranking.config.decay;
    config["max_steps"] = ranking.config.max_steps;
    config["rng_seed"] = ranking.config.rng_seed;
    config["mode"] = ranking.config.mode == PropagationMode::expectation
                         ? "expectation"
                         : "monte_carlo";
    j["config"] = std::move(config);

    ordered_json blackout;
    blackout["enabled"] = ranking.blackout.enabled;
    blackout["energy"] = ranking.blackout.blackout_energy;
    blackout["decay"] = ranking.blackout.blackout_decay;
    blackout["steps"] = ranking.blackout.blackout_steps;
    blackout["particles_per_author"] = ranking.blackout.particles_per_author;
    j["blackout"] = std::move(blackout);

    auto render_all = [](const std::vector<AuthorKey>& keys) {
        ordered_json arr = ordered_json::array();
        for (const AuthorKey& k : keys) arr.push_back(render_author_key(k));
        return arr;
    };
    j["missing_references"] = render_all(ranking.missing_references);
    j["authors_not_in_graph"] = render_all(ranking.authors_not_in_graph);

    ordered_json entries = ordered_json::array();
    for (const RankingEntry& e : ranking.entries) {
        ordered_json entry;
        entry["author"] = render_author_key(e.author);
        entry["raw_energy"] = e.raw_energy;
        entry["membership"] = e.membership;
        entries.push_back(std::move(entry));
    }
    j["entries"] = std::move(entries);
    return j.dump();
}

}  // namespace refswarm
