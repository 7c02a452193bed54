#include "refswarm/swarm.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

void SwarmConfig::validate() const {
    if (particles_per_reference < 1)
        throw std::invalid_argument("particles_per_reference must be >= 1");
    if (!std::isfinite(initial_energy) || initial_energy <= 0.0)
        throw std::invalid_argument("initial_energy must be finite and > 0");
    if (!(decay >= 0.0 && decay <= 1.0))
        throw std::invalid_argument("decay must be in [0,1]");
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (threads < 0) throw std::invalid_argument("threads must be >= 0");
}

void BlackoutConfig::validate() const {
    if (!std::isfinite(blackout_energy) || blackout_energy >= 0.0)
        throw std::invalid_argument("blackout_energy must be finite and < 0");
    if (!(blackout_decay >= 0.0 && blackout_decay <= 1.0))
        throw std::invalid_argument("blackout_decay must be in [0,1]");
    if (blackout_steps < 0) throw std::invalid_argument("blackout_steps must be >= 0");
    if (particles_per_author < 1)
        throw std::invalid_argument("particles_per_author must be >= 1");
}

void EnergyVector::add(NodeId node, double value) {
    if (value == 0.0) return;
    auto [it, inserted] = values_.try_emplace(node, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0.0) values_.erase(it);
    }
}

double EnergyVector::at(NodeId node) const {
    auto it = values_.find(node);
    return it == values_.end() ? 0.0 : it->second;
}

void EnergyVector::add_clamped(const EnergyVector& other) {
    for (const auto& [node, value] : other.values_) {
        auto it = values_.find(node);
        const double sum = (it == values_.end() ? 0.0 : it->second) + value;
        if (sum > 0.0) {
            if (it == values_.end())
                values_.emplace(node, sum);
            else
                it->second = sum;
        } else if (it != values_.end()) {
            values_.erase(it);
        }
    }
}

double EnergyVector::total() const {
    double sum = 0.0, comp = 0.0;
    for (const auto& [node, value] : values_) {
        const double y = value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double EnergyVector::max_value() const {
    double best = 0.0;
    bool first = true;
    for (const auto& [node, value] : values_) {
        if (first || value > best) best = value;
        first = false;
    }
    return values_.empty() ? 0.0 : best;
}

std::vector<std::pair<NodeId, double>> EnergyVector::sorted_entries() const {
    std::vector<std::pair<NodeId, double>> entries(values_.begin(), values_.end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return entries;
}

ParticleRng::ParticleRng(std::uint64_t base_seed, std::uint64_t particle_index)
    : state_(mix64(base_seed + 0x9E3779B97F4A7C15ull) ^
             mix64(particle_index * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull)) {}

std::uint64_t ParticleRng::next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
}

double ParticleRng::next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Particle> seed_particles(const SeedMultiset& seeds,
                                     const SwarmConfig& config) {
    if (seeds.empty()) throw NoSeedsError("empty seed multiset");
    if (config.particles_per_reference < 1)
        throw std::invalid_argument("particles_per_reference must be >= 1");

    std::vector<Particle> particles;
    for (const auto& [node, multiplicity] : seeds) {
        if (multiplicity < 1)
            throw std::invalid_argument("seed multiplicity must be >= 1");
        const std::size_t count =
            static_cast<std::size_t>(multiplicity) *
            static_cast<std::size_t>(config.particles_per_reference);
        particles.insert(particles.end(), count,
                         Particle{config.initial_energy, config.decay, node});
    }
    return particles;
}

Particle step_particle(Particle particle, const CoauthorGraph& graph,
                       ParticleRng& rng, EnergyVector& accumulator) {
    if (particle.energy == 0.0) return particle;

    accumulator.add(particle.location, particle.energy);
    particle.energy *= 1.0 - particle.decay;

    const auto nbrs = graph.neighbors(particle.location);
    if (nbrs.empty()) {
        particle.energy = 0.0;  // sink: deposit once, then die
        return particle;
    }
    const auto probs = graph.probabilities(particle.location);
    const double u = rng.next_unit();
    double cum = 0.0;
    std::size_t chosen = nbrs.size() - 1;
    for (std::size_t e = 0; e < probs.size(); ++e) {
        cum += probs[e];
        if (u < cum) {
            chosen = e;
            break;
        }
    }
    particle.location = nbrs[chosen];
    return particle;
}

EnergyVector propagate(const std::vector<Particle>& particles,
                       const CoauthorGraph& graph, const SwarmConfig& config) {
    if (!graph.normalized())
        throw std::logic_error("propagate requires a normalized graph");
    if (config.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");

    EnergyVector out;
    if (particles.empty()) return out;

    const std::size_t n = graph.node_count();
    const auto offsets = graph.offsets();
    const auto adjacency = graph.adjacency();
    const auto probabilities = graph.adjacency_probabilities();

    // Per-node cumulative outgoing probabilities, aligned with the CSR
    // adjacency, so a step is one uniform draw plus a binary search.
    std::vector<double> cum(probabilities.size());
    for (std::size_t node = 0; node < n; ++node) {
        double running = 0.0;
        for (auto e = offsets[node]; e < offsets[node + 1]; ++e) {
            running += probabilities[e];
            cum[e] = running;
        }
    }

    // Particles are processed in fixed chunks and the per-chunk partial sums
    // merged in chunk order, so the result does not depend on the number of
    // worker threads (and the two-level summation keeps rounding error low).
    constexpr std::size_t kChunk = 1024;
    const std::size_t n_chunks = (particles.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<std::pair<NodeId, double>>> chunk_sums(n_chunks);
    std::atomic<std::size_t> next_chunk{0};

    auto worker = [&] {
        std::vector<double> scratch(n, 0.0);
        std::vector<std::uint32_t> stamp(n, 0);
        std::uint32_t epoch = 0;
        std::vector<NodeId> touched;
        for (;;) {
            const std::size_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks) break;
            ++epoch;
            touched.clear();
            const std::size_t begin = c * kChunk;
            const std::size_t end = std::min(begin + kChunk, particles.size());
            for (std::size_t i = begin; i < end; ++i) {
                Particle p = particles[i];
                ParticleRng rng(config.rng_seed, i);
                const double keep = 1.0 - p.decay;
                for (int t = 0; t < config.max_steps; ++t) {
                    if (p.energy == 0.0) break;
                    if (stamp[p.location] != epoch) {
                        stamp[p.location] = epoch;
                        scratch[p.location] = p.energy;
                        touched.push_back(p.location);
                    } else {
                        scratch[p.location] += p.energy;
                    }
                    p.energy *= keep;
                    const auto e_begin = offsets[p.location];
                    const auto e_end = offsets[p.location + 1];
                    if (e_begin == e_end) break;  // sink
                    const double u = rng.next_unit();
                    const auto first = cum.begin() + static_cast<std::ptrdiff_t>(e_begin);
                    const auto last = cum.begin() + static_cast<std::ptrdiff_t>(e_end);
                    auto it = std::upper_bound(first, last, u);
                    if (it == last) --it;
                    p.location = adjacency[static_cast<std::size_t>(it - cum.begin())];
                }
            }
            auto& sums = chunk_sums[c];
            sums.reserve(touched.size());
            for (NodeId node : touched) sums.emplace_back(node, scratch[node]);
        }
    };

    int n_threads = config.threads;
    if (n_threads == 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        n_threads = hc ? static_cast<int>(hc) : 1;
    }
    n_threads = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(n_threads), n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (const auto& sums : chunk_sums)
        for (const auto& [node, value] : sums) out.add(node, value);
    return out;
}

EnergyVector propagate_expectation(const SeedMultiset& seeds,
                                   const CoauthorGraph& graph,
                                   const SwarmConfig& config) {
    if (!graph.normalized())
        throw std::logic_error("propagate_expectation requires a normalized graph");
    if (config.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (seeds.empty()) throw NoSeedsError("empty seed multiset");

    const std::size_t n = graph.node_count();
    const auto offsets = graph.offsets();
    const auto adjacency = graph.adjacency();
    const auto probabilities = graph.adjacency_probabilities();

    std::vector<double> mass(n, 0.0), next_mass(n, 0.0), acc(n, 0.0);
    std::vector<NodeId> frontier, next_frontier;
    std::vector<bool> pending(n, false);

    for (const auto& [node, multiplicity] : seeds) {
        if (node >= n)
            throw std::out_of_range("unknown node id " + std::to_string(node));
        if (multiplicity < 1)
            throw std::invalid_argument("seed multiplicity must be >= 1");
        mass[node] = static_cast<double>(multiplicity) *
                     static_cast<double>(config.particles_per_reference) *
                     config.initial_energy;
        frontier.push_back(node);
    }

    const double keep = 1.0 - config.decay;
    double scale = 1.0;  // (1-decay)^(t-1)
    for (int t = 0; t < config.max_steps && !frontier.empty(); ++t) {
        for (NodeId u : frontier) acc[u] += scale * mass[u];
        scale *= keep;
        if (scale == 0.0) break;

        next_frontier.clear();
        for (NodeId u : frontier) {
            for (auto e = offsets[u]; e < offsets[u + 1]; ++e) {
                const NodeId v = adjacency[e];
                next_mass[v] += mass[u] * probabilities[e];
                if (!pending[v]) {
                    pending[v] = true;
                    next_frontier.push_back(v);
                }
            }
            mass[u] = 0.0;  // sink mass simply never re-enters
        }
        std::sort(next_frontier.begin(), next_frontier.end());
        for (NodeId v : next_frontier) {
            mass[v] = next_mass[v];
            next_mass[v] = 0.0;
            pending[v] = false;
        }
        frontier.swap(next_frontier);
    }

    EnergyVector out;
    for (std::size_t node = 0; node < n; ++node)
        if (acc[node] != 0.0) out.add(static_cast<NodeId>(node), acc[node]);
    return out;
}

EnergyVector apply_blackout(const EnergyVector& base,
                            std::span<const NodeId> author_nodes,
                            const BlackoutConfig& blackout,
                            const CoauthorGraph& graph,
                            const SwarmConfig& config) {
    if (!blackout.enabled || blackout.blackout_steps == 0) return base;
    blackout.validate();
    if (author_nodes.empty()) return base;

    SeedMultiset authors;
    for (NodeId a : author_nodes) authors[a] = 1;

    SwarmConfig negative = config;
    negative.particles_per_reference = blackout.particles_per_author;
    negative.initial_energy = blackout.blackout_energy;
    negative.decay = blackout.blackout_decay;
    // One round per hop distance 0..blackout_steps: the cancelled region is
    // exactly the blackout_steps-neighborhood of the author nodes.
    negative.max_steps = blackout.blackout_steps + 1;
    // Decorrelate the negative swarm's streams from the positive swarm's.
    negative.rng_seed = mix64(config.rng_seed ^ 0x626c61636b6f7574ull);

    const EnergyVector negative_field =
        config.mode == PropagationMode::expectation
            ? propagate_expectation(authors, graph, negative)
            : propagate(seed_particles(authors, negative), graph, negative);

    EnergyVector out = base;
    out.add_clamped(negative_field);
    return out;
}

EnergyVector normalize_energy(const EnergyVector& energies) {
    const double max = energies.max_value();
    if (energies.empty() || !(max > 0.0))
        throw NoEnergyError("no node received positive energy");
    EnergyVector out;
    for (const auto& [node, value] : energies.sorted_entries())
        out.add(node, value / max);
    return out;
}

std::string export_energies(const EnergyVector& energies,
                            const CoauthorGraph& graph) {
    std::vector<std::pair<AuthorKey, double>> rows;
    rows.reserve(energies.size());
    for (const auto& [node, value] : energies.sorted_entries())
        rows.emplace_back(graph.key_of(node), value);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::string out;
    for (const auto& [key, value] : rows) {
        out += render_author_key(key);
        out += '\t';
        out += format_double(value);
        out += '\n';
    }
    return out;
}

}  // namespace refswarm
