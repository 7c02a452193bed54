#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "refswarm/authors.hpp"
#include "refswarm/corpus.hpp"

namespace refswarm {

using NodeId = std::uint32_t;

// Weighted undirected co-authorship graph in CSR form. Nodes are authors;
// an edge's raw weight accumulates 1/(A(m)-1) over every manuscript m the
// two authors share, so large collaborations contribute less per pair than
// small ones, and repeat collaborations add up.
//
// Node ids are dense and canonical: authors are numbered in AuthorKey order,
// so graphs built from reordered corpora compare equal. Within one node's
// adjacency the neighbors are sorted ascending.
//
// Raw weights are kept alongside the normalized per-node outgoing
// probability distribution (filled by normalize()), so the graph can be
// re-normalized after edits and round-trips exactly through persistence.
class CoauthorGraph {
public:
    struct Edge {
        NodeId neighbor;
        double raw_weight;
        double probability;  // 0 until normalize()

        bool operator==(const Edge&) const = default;
    };

    CoauthorGraph() = default;

    // Assembles a graph from an explicit node table plus one entry per
    // unordered edge {u,v} with u != v and raw weight > 0. Used by
    // generators, benchmarks and persistence; build_graph is the Eq-style
    // corpus path.
    static CoauthorGraph from_edges(
        std::vector<AuthorKey> node_keys,
        std::span<const std::tuple<NodeId, NodeId, double>> edges);

    std::size_t node_count() const { return node_keys_.size(); }
    std::uint64_t undirected_edge_count() const { return adjacency_entries() / 2; }
    std::uint64_t adjacency_entries() const { return neighbors_.size(); }

    const AuthorKey& key_of(NodeId node) const;
    // Returns the node for a key, or npos if the author is not in the graph.
    static constexpr NodeId npos = static_cast<NodeId>(-1);
    NodeId find(const AuthorKey& key) const;

    std::size_t degree(NodeId node) const;
    std::span<const NodeId> neighbors(NodeId node) const;
    std::span<const double> raw_weights(NodeId node) const;
    std::span<const double> probabilities(NodeId node) const;

    // Raw CSR views for tight propagation loops: node n's adjacency slice is
    // [offsets()[n], offsets()[n+1]).
    std::span<const std::uint64_t> offsets() const { return offsets_; }
    std::span<const NodeId> adjacency() const { return neighbors_; }
    std::span<const double> adjacency_raw_weights() const { return raw_weights_; }
    std::span<const double> adjacency_probabilities() const;

    bool normalized() const { return normalized_; }

    // Fills each node's outgoing probabilities proportionally to its raw
    // weights. Isolated nodes keep an empty distribution.
    void normalize();

    bool operator==(const CoauthorGraph&) const;

private:
    friend CoauthorGraph build_graph(const Corpus& corpus);
    friend CoauthorGraph load_graph(std::istream& in);

    void check_node(NodeId node) const;
    void rebuild_key_index();

    std::vector<AuthorKey> node_keys_;
    std::unordered_map<AuthorKey, NodeId, AuthorKeyHash> key_to_node_;
    std::vector<std::uint64_t> offsets_;  // size node_count()+1
    std::vector<NodeId> neighbors_;
    std::vector<double> raw_weights_;
    std::vector<double> probabilities_;
    bool normalized_ = false;
};

// Builds the co-authorship graph of a corpus. Only authors become nodes;
// people that are merely referenced do not. Single-author manuscripts
// contribute their node but no edges. Runtime is linear-ish in the total
// number of co-author pair incidences.
CoauthorGraph build_graph(const Corpus& corpus);

// All nodes within `radius` hops of any seed (radius 0 = the seeds).
// Throws std::out_of_range for unknown ids.
std::vector<NodeId> neighborhood(const CoauthorGraph& graph,
                                 std::span<const NodeId> seeds, int radius);

}  // namespace refswarm
