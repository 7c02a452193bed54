#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "refswarm/graph.hpp"

namespace refswarm {

enum class PropagationMode {
    monte_carlo,  // discrete random walkers (the reference algorithm)
    expectation,  // exact expected deposits, the infinite-population limit
};

struct SwarmConfig {
    int particles_per_reference = 100;
    double initial_energy = 1.0;
    double decay = 0.15;   // in [0,1]
    int max_steps = 100;   // k
    std::uint64_t rng_seed = 0;
    PropagationMode mode = PropagationMode::monte_carlo;
    int threads = 1;  // worker threads for monte_carlo; output is identical
                      // for every value

    void validate() const;  // throws std::invalid_argument
};

// Negative "black-out" swarm launched from a submission's author nodes to
// cancel energy in their graph vicinity (conflict-of-interest suppression).
// blackout_steps bounds how far the cancellation spreads: deposits land on
// every hop distance 0..blackout_steps, and 0 disables the swarm entirely.
struct BlackoutConfig {
    bool enabled = false;
    double blackout_energy = -1000.0;  // < 0
    double blackout_decay = 0.0;       // in [0,1]
    int blackout_steps = 2;            // >= 0; 0 means no-op
    int particles_per_author = 100;

    void validate() const;
};

struct Particle {
    double energy;
    double decay;
    NodeId location;
};

// Seed node -> reference multiplicity. Ordered so seeding is canonical.
using SeedMultiset = std::map<NodeId, int>;

// Sparse node -> accumulated energy map (the swarm's output vector).
// Never stores explicit zeros.
class EnergyVector {
public:
    void add(NodeId node, double value);
    double at(NodeId node) const;  // 0.0 if absent
    bool contains(NodeId node) const { return values_.contains(node); }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    // Merges `other` in, then drops every entry that is now <= 0.
    void add_clamped(const EnergyVector& other);

    // Compensated (Kahan) sum of all entries.
    double total() const;
    double max_value() const;  // 0.0 if empty

    // Entries sorted by node id.
    std::vector<std::pair<NodeId, double>> sorted_entries() const;

    bool operator==(const EnergyVector&) const = default;

private:
    std::unordered_map<NodeId, double> values_;
};

// Per-particle deterministic random stream: particle i always draws the
// same sequence for a given base seed, no matter which thread runs it.
class ParticleRng {
public:
    ParticleRng(std::uint64_t base_seed, std::uint64_t particle_index);
    std::uint64_t next();
    double next_unit();  // uniform in [0,1)

private:
    std::uint64_t state_;
};

// Places multiplicity * particles_per_reference particles on each seed node,
// each carrying the configured initial energy and decay.
// Throws NoSeedsError on an empty multiset.
std::vector<Particle> seed_particles(const SeedMultiset& seeds,
                                     const SwarmConfig& config);

// One swarm step for one particle: deposit the particle's energy at its
// location, decay it, then hop to a neighbor drawn from the location's
// outgoing distribution — or die (energy 0) if the location is a sink.
Particle step_particle(Particle particle, const CoauthorGraph& graph,
                       ParticleRng& rng, EnergyVector& accumulator);

// Runs all particles for config.max_steps steps (Monte Carlo). Particle i's
// randomness comes from ParticleRng(config.rng_seed, i) and partial sums are
// merged in a fixed chunk order, so the result is bit-deterministic for any
// config.threads.
EnergyVector propagate(const std::vector<Particle>& particles,
                       const CoauthorGraph& graph, const SwarmConfig& config);

// Exact expected energy of the swarm: pushes the seed mass through the
// transition distribution for max_steps steps, depositing
// (1-decay)^(t-1)-scaled mass at each step; sink mass dies after its
// deposit. No randomness; single-threaded.
EnergyVector propagate_expectation(const SeedMultiset& seeds,
                                   const CoauthorGraph& graph,
                                   const SwarmConfig& config);

// Launches the negative swarm from the author nodes, merges its deposits
// into a copy of `base`, and clamps: entries dragged to or below zero are
// removed. blackout disabled or blackout_steps == 0 returns `base` as is.
// The swarm mode (monte_carlo/expectation) follows config.mode; the Monte
// Carlo variant draws from an rng stream decorrelated from the positive
// swarm's.
EnergyVector apply_blackout(const EnergyVector& base,
                            std::span<const NodeId> author_nodes,
                            const BlackoutConfig& blackout,
                            const CoauthorGraph& graph,
                            const SwarmConfig& config);

// Divides every entry by the maximum entry, mapping energies to membership
// weights in [0,1]. Throws NoEnergyError if there is no strictly positive
// entry.
EnergyVector normalize_energy(const EnergyVector& energies);

// Line-delimited "author<TAB>energy" export, energy descending, ties by
// author key ascending. Doubles are shortest-round-trip formatted.
std::string export_energies(const EnergyVector& energies,
                            const CoauthorGraph& graph);

}  // namespace refswarm
