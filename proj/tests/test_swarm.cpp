#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "refswarm/errors.hpp"
#include "refswarm/swarm.hpp"
#include "refswarm/synth.hpp"

using namespace refswarm;
using oracles::graph_from_edges;

namespace {

SwarmConfig config_of(int particles, double decay, int steps,
                      PropagationMode mode = PropagationMode::monte_carlo,
                      std::uint64_t seed = 1) {
    SwarmConfig cfg;
    cfg.particles_per_reference = particles;
    cfg.decay = decay;
    cfg.max_steps = steps;
    cfg.mode = mode;
    cfg.rng_seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("seed_particles honors reference multiplicity") {
    const SwarmConfig cfg = config_of(100, 0.15, 100);

    SUBCASE("one reference -> 100 particles") {
        const auto particles = seed_particles({{3, 1}}, cfg);
        CHECK(particles.size() == 100);
        for (const Particle& p : particles) {
            CHECK(p.location == 3);
            CHECK(p.energy == 1.0);
            CHECK(p.decay == 0.15);
        }
    }
    SUBCASE("two references -> 200 particles") {
        CHECK(seed_particles({{3, 2}}, cfg).size() == 200);
    }
    SUBCASE("two authors once each -> 100 per node") {
        const auto particles = seed_particles({{1, 1}, {2, 1}}, cfg);
        CHECK(particles.size() == 200);
        CHECK(std::count_if(particles.begin(), particles.end(),
                            [](const Particle& p) { return p.location == 1; }) == 100);
    }
    SUBCASE("empty multiset is an error") {
        CHECK_THROWS_AS(seed_particles({}, cfg), NoSeedsError);
    }
}

TEST_CASE("step_particle deposits, decays, then moves") {
    const CoauthorGraph g = graph_from_edges(2, {{0, 1, 1.0}});
    ParticleRng rng(0, 0);
    EnergyVector acc;
    Particle p{1.0, 0.15, 0};
    p = step_particle(p, g, rng, acc);
    CHECK(acc.at(0) == 1.0);
    CHECK(p.energy == 0.85);
    CHECK(p.location == 1);
}

TEST_CASE("step_particle at an isolated node deposits once and dies") {
    std::vector<AuthorKey> keys{oracles::key("a"), oracles::key("b")};
    CoauthorGraph g = CoauthorGraph::from_edges(
        std::move(keys), std::vector<std::tuple<NodeId, NodeId, double>>{});
    g.normalize();
    ParticleRng rng(0, 0);
    EnergyVector acc;
    Particle p = step_particle({1.0, 0.15, 0}, g, rng, acc);
    CHECK(acc.at(0) == 1.0);
    CHECK(p.energy == 0.0);
}

TEST_CASE("zero decay leaves the particle energy unchanged") {
    const CoauthorGraph g = graph_from_edges(2, {{0, 1, 1.0}});
    ParticleRng rng(0, 0);
    EnergyVector acc;
    const Particle p = step_particle({1.0, 0.0, 0}, g, rng, acc);
    CHECK(p.energy == 1.0);
}

TEST_CASE("forced two-node path deposits 1.0 at each end") {
    const CoauthorGraph g = graph_from_edges(2, {{0, 1, 1.0}});
    SwarmConfig cfg = config_of(1, 0.0, 2);
    const EnergyVector e = propagate(seed_particles({{0, 1}}, cfg), g, cfg);
    CHECK(e.at(0) == 1.0);
    CHECK(e.at(1) == 1.0);
}

TEST_CASE("energy after 100 decays matches the 8.74e-8 figure") {
    const CoauthorGraph g = graph_from_edges(2, {{0, 1, 1.0}});
    ParticleRng rng(0, 0);
    EnergyVector acc;
    Particle p{1.0, 0.15, 0};
    for (int t = 0; t < 99; ++t) p = step_particle(p, g, rng, acc);
    CHECK(p.energy == doctest::Approx(std::pow(0.85, 99)).epsilon(1e-12));
    CHECK(p.energy == doctest::Approx(1.03e-7).epsilon(0.01));
    p = step_particle(p, g, rng, acc);
    CHECK(std::abs(p.energy / 8.74e-8 - 1.0) < 0.001);
}

TEST_CASE("particle energy magnitude never increases") {
    const CoauthorGraph g = synth::random_connected_graph(30, 40, 2);
    ParticleRng seeds(99, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double decay = seeds.next_unit();
        const double energy = trial % 2 == 0 ? 1.0 : -1000.0;
        Particle p{energy, decay, static_cast<NodeId>(seeds.next() % 30)};
        ParticleRng rng(7, static_cast<std::uint64_t>(trial));
        EnergyVector acc;
        double last = std::abs(p.energy);
        for (int t = 0; t < 40 && p.energy != 0.0; ++t) {
            p = step_particle(p, g, rng, acc);
            CHECK(std::abs(p.energy) <= last);
            last = std::abs(p.energy);
        }
    }
}

TEST_CASE("propagate equals a manual step_particle loop with the same streams") {
    const CoauthorGraph g = synth::random_connected_graph(25, 35, 5);
    SwarmConfig cfg = config_of(40, 0.2, 12, PropagationMode::monte_carlo, 77);
    const auto particles = seed_particles({{0, 1}, {3, 2}}, cfg);

    EnergyVector manual;
    for (std::size_t i = 0; i < particles.size(); ++i) {
        Particle p = particles[i];
        ParticleRng rng(cfg.rng_seed, i);
        for (int t = 0; t < cfg.max_steps && p.energy != 0.0; ++t)
            p = step_particle(p, g, rng, manual);
    }

    const EnergyVector fast = propagate(particles, g, cfg);
    const auto a = manual.sorted_entries();
    const auto b = fast.sorted_entries();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].first == b[i].first);
        CHECK(a[i].second == doctest::Approx(b[i].second).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo output is identical for any thread count") {
    const CoauthorGraph g = synth::random_connected_graph(50, 120, 8);
    SwarmConfig cfg = config_of(500, 0.15, 30, PropagationMode::monte_carlo, 123);
    const auto particles = seed_particles({{0, 2}, {7, 1}, {20, 3}}, cfg);

    cfg.threads = 1;
    const EnergyVector serial = propagate(particles, g, cfg);
    for (int threads : {2, 3, 8}) {
        cfg.threads = threads;
        CHECK(propagate(particles, g, cfg) == serial);
    }
}

TEST_CASE("total deposited energy matches the geometric series exactly") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const CoauthorGraph g = synth::random_connected_graph(80, 150, seed);
        for (double decay : {0.0, 0.15, 0.6}) {
            SwarmConfig cfg = config_of(200, decay, 40, PropagationMode::monte_carlo,
                                        seed + 100);
            const auto particles = seed_particles({{1, 1}, {5, 2}}, cfg);
            const EnergyVector e = propagate(particles, g, cfg);
            const double per_particle =
                decay > 0.0 ? (1.0 - std::pow(1.0 - decay, cfg.max_steps)) / decay
                            : static_cast<double>(cfg.max_steps);
            const double expected = static_cast<double>(particles.size()) * per_particle;
            CHECK(std::abs(e.total() - expected) <= 1e-9 * expected);
        }
    }
}

TEST_CASE("energy never reaches past k-1 hops (both modes)") {
    // path 0-1-2-3-4, seed at 0, k=2: only nodes 0 and 1 can be touched
    const CoauthorGraph g = graph_from_edges(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    SwarmConfig cfg = config_of(50, 0.15, 2);
    const EnergyVector mc = propagate(seed_particles({{0, 1}}, cfg), g, cfg);
    CHECK(mc.at(0) > 0.0);
    CHECK(mc.at(1) > 0.0);
    CHECK_FALSE(mc.contains(2));
    CHECK_FALSE(mc.contains(3));

    const EnergyVector ex = propagate_expectation({{0, 1}}, g, cfg);
    CHECK(ex.at(0) > 0.0);
    CHECK(ex.at(1) > 0.0);
    CHECK_FALSE(ex.contains(2));
}

TEST_CASE("expectation mode: an isolated seed keeps exactly one deposit") {
    std::vector<AuthorKey> keys{oracles::key("a")};
    CoauthorGraph g = CoauthorGraph::from_edges(
        std::move(keys), std::vector<std::tuple<NodeId, NodeId, double>>{});
    g.normalize();
    SwarmConfig cfg = config_of(100, 0.15, 50, PropagationMode::expectation);
    const EnergyVector e = propagate_expectation({{0, 1}}, g, cfg);
    CHECK(e.size() == 1);
    CHECK(e.at(0) == 100.0);
}

TEST_CASE("expectation equals monte carlo exactly on a forced path") {
    const CoauthorGraph g = graph_from_edges(2, {{0, 1, 1.0}});
    SwarmConfig cfg = config_of(1, 0.0, 2);
    const EnergyVector mc = propagate(seed_particles({{0, 1}}, cfg), g, cfg);
    const EnergyVector ex = propagate_expectation({{0, 1}}, g, cfg);
    CHECK(mc == ex);

    // with decay: the deposit sequence is the same chain of multiplications
    SwarmConfig decayed = config_of(1, 0.15, 6);
    const EnergyVector mc2 = propagate(seed_particles({{0, 1}}, decayed), g, decayed);
    const EnergyVector ex2 = propagate_expectation({{0, 1}}, g, decayed);
    CHECK(mc2 == ex2);
}

TEST_CASE("expectation matches brute-force trajectory enumeration to 1e-12") {
    // branching 5-node graph with a sink hanging off node 3
    std::vector<AuthorKey> keys;
    for (int i = 0; i < 5; ++i) keys.push_back(oracles::key("n" + std::to_string(i)));
    std::vector<std::tuple<NodeId, NodeId, double>> edges{
        {0, 1, 2.0}, {0, 2, 1.0}, {1, 2, 0.5}, {1, 3, 1.5}, {2, 3, 1.0}};
    CoauthorGraph g = CoauthorGraph::from_edges(std::move(keys), edges);
    g.normalize();  // node 4 is isolated: seeds there die immediately

    for (int k = 1; k <= 6; ++k) {
        SwarmConfig cfg = config_of(10, 0.15, k, PropagationMode::expectation);
        const SeedMultiset seeds{{0, 2}, {2, 1}};
        const EnergyVector got = propagate_expectation(seeds, g, cfg);
        const auto want = oracles::enumerate_expected_energies(g, seeds, cfg);
        REQUIRE(got.size() == want.size());
        for (const auto& [node, value] : want)
            CHECK(got.at(node) == doctest::Approx(value).epsilon(1e-12));
    }
}

TEST_CASE("monte carlo converges to the expectation oracle") {
    // 3-node path, heavy particle budget; per-node deviation within a few
    // standard errors, bounded via Var(X) <= S_max * E[X]
    const CoauthorGraph g = graph_from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    SwarmConfig cfg = config_of(100'000, 0.15, 4, PropagationMode::monte_carlo, 9);
    const SeedMultiset seeds{{0, 1}};
    const EnergyVector mc = propagate(seed_particles(seeds, cfg), g, cfg);
    const EnergyVector ex = propagate_expectation(seeds, g, cfg);

    const double s_max = (1.0 - std::pow(0.85, cfg.max_steps)) / 0.15;
    for (NodeId n = 0; n < 3; ++n) {
        const double expected = ex.at(n);
        const double bound = 4.0 * std::sqrt(s_max * expected);
        CHECK(std::abs(mc.at(n) - expected) <= bound);
    }
}

TEST_CASE("blackout with zero steps returns the base untouched") {
    const CoauthorGraph g = synth::random_connected_graph(20, 30, 3);
    SwarmConfig cfg = config_of(50, 0.15, 10, PropagationMode::expectation);
    const EnergyVector base = propagate_expectation({{0, 1}}, g, cfg);

    BlackoutConfig blackout;
    blackout.enabled = true;
    blackout.blackout_steps = 0;
    const std::vector<NodeId> authors{2};
    CHECK(apply_blackout(base, authors, blackout, g, cfg) == base);

    blackout.enabled = false;
    blackout.blackout_steps = 2;
    CHECK(apply_blackout(base, authors, blackout, g, cfg) == base);
}

TEST_CASE("one-step blackout zeroes the star center and its leaves only") {
    // star 0-(1,2,3) plus a distance-2 node 4 behind leaf 1
    const CoauthorGraph g = graph_from_edges(
        5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {1, 4, 1.0}});
    SwarmConfig cfg = config_of(10, 0.15, 20, PropagationMode::expectation);
    const EnergyVector base = propagate_expectation({{4, 1}}, g, cfg);
    REQUIRE(base.at(0) > 0.0);
    REQUIRE(base.at(4) > 0.0);

    BlackoutConfig blackout;
    blackout.enabled = true;
    blackout.blackout_steps = 1;
    blackout.blackout_energy = -1e9;
    const std::vector<NodeId> authors{0};
    const EnergyVector out = apply_blackout(base, authors, blackout, g, cfg);
    CHECK_FALSE(out.contains(0));
    CHECK_FALSE(out.contains(1));
    CHECK_FALSE(out.contains(2));
    CHECK_FALSE(out.contains(3));
    CHECK(out.at(4) == base.at(4));  // untouched bit-for-bit
}

TEST_CASE("blackout removal region equals the k-hop neighborhood") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const CoauthorGraph g = synth::random_connected_graph(40, 60, seed + 30);
        SwarmConfig cfg = config_of(20, 0.15, 25, PropagationMode::expectation);
        const SeedMultiset seeds{{1, 1}, {17, 2}};
        const EnergyVector base = propagate_expectation(seeds, g, cfg);
        const std::vector<NodeId> authors{5, 11};

        for (int k = 1; k <= 3; ++k) {
            BlackoutConfig blackout;
            blackout.enabled = true;
            blackout.blackout_steps = k;
            blackout.blackout_energy = -1e12;
            const EnergyVector out = apply_blackout(base, authors, blackout, g, cfg);

            std::vector<NodeId> zone = neighborhood(g, authors, k);
            for (const auto& [node, value] : base.sorted_entries()) {
                const bool in_zone =
                    std::binary_search(zone.begin(), zone.end(), node);
                if (in_zone)
                    CHECK_FALSE(out.contains(node));
                else
                    CHECK(out.at(node) == value);
            }
        }
    }
}

TEST_CASE("dominant blackout is idempotent in expectation mode") {
    const CoauthorGraph g = synth::random_connected_graph(30, 45, 12);
    SwarmConfig cfg = config_of(50, 0.15, 15, PropagationMode::expectation);
    const EnergyVector base = propagate_expectation({{3, 1}, {9, 1}}, g, cfg);

    BlackoutConfig blackout;
    blackout.enabled = true;
    blackout.blackout_steps = 2;
    blackout.blackout_energy = -1e12;
    const std::vector<NodeId> authors{4};
    const EnergyVector once = apply_blackout(base, authors, blackout, g, cfg);
    const EnergyVector twice = apply_blackout(once, authors, blackout, g, cfg);
    CHECK(once == twice);
}

TEST_CASE("normalize_energy divides by the maximum") {
    EnergyVector e;
    e.add(0, 2.0);
    e.add(1, 1.0);
    const EnergyVector n = normalize_energy(e);
    CHECK(n.at(0) == 1.0);
    CHECK(n.at(1) == 0.5);

    EnergyVector single;
    single.add(4, 5.0);
    CHECK(normalize_energy(single).at(4) == 1.0);
}

TEST_CASE("normalize_energy on an empty vector reports no energy") {
    EnergyVector empty;
    CHECK_THROWS_AS(normalize_energy(empty), NoEnergyError);
}

TEST_CASE("normalize_energy preserves the ranking order") {
    const CoauthorGraph g = synth::random_connected_graph(35, 55, 21);
    SwarmConfig cfg = config_of(100, 0.15, 12, PropagationMode::monte_carlo, 4);
    const EnergyVector e = propagate(seed_particles({{2, 1}, {8, 1}}, cfg), g, cfg);
    const EnergyVector n = normalize_energy(e);

    auto by_energy = [](const EnergyVector& v) {
        auto entries = v.sorted_entries();
        std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        std::vector<NodeId> order;
        for (const auto& [node, value] : entries) order.push_back(node);
        return order;
    };
    CHECK(by_energy(e) == by_energy(n));
    CHECK(n.max_value() == 1.0);
}

TEST_CASE("export_energies orders by energy, then author key") {
    Corpus c;
    c.manuscripts.push_back(oracles::manuscript("m", {"b bob", "a alice", "c carol"}));
    CoauthorGraph g = build_graph(c);
    g.normalize();

    EnergyVector e;
    e.add(g.find(oracles::key("b bob")), 2.0);
    e.add(g.find(oracles::key("c carol")), 0.5);
    e.add(g.find(oracles::key("a alice")), 0.5);  // ties with carol
    CHECK(export_energies(e, g) ==
          "b. bob\t2\n"
          "a. alice\t0.5\n"
          "c. carol\t0.5\n");
}

TEST_CASE("EnergyVector drops entries that cancel to zero") {
    EnergyVector e;
    e.add(1, 0.5);
    e.add(1, -0.5);
    CHECK_FALSE(e.contains(1));
    CHECK(e.empty());
    e.add(2, 0.0);
    CHECK(e.empty());
}
