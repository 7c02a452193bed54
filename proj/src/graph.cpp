#include "refswarm/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

struct Incidence {
    std::uint64_t pair;  // src << 32 | dst
    double addend;
};

std::uint64_t pack(NodeId src, NodeId dst) {
    return (static_cast<std::uint64_t>(src) << 32) | dst;
}

}  // namespace

const AuthorKey& CoauthorGraph::key_of(NodeId node) const {
    check_node(node);
    return node_keys_[node];
}

NodeId CoauthorGraph::find(const AuthorKey& key) const {
    auto it = key_to_node_.find(key);
    return it == key_to_node_.end() ? npos : it->second;
}

std::size_t CoauthorGraph::degree(NodeId node) const {
    check_node(node);
    return offsets_[node + 1] - offsets_[node];
}

std::span<const NodeId> CoauthorGraph::neighbors(NodeId node) const {
    check_node(node);
    return {neighbors_.data() + offsets_[node], degree(node)};
}

std::span<const double> CoauthorGraph::raw_weights(NodeId node) const {
    check_node(node);
    return {raw_weights_.data() + offsets_[node], degree(node)};
}

std::span<const double> CoauthorGraph::probabilities(NodeId node) const {
    check_node(node);
    if (!normalized_) throw std::logic_error("graph is not normalized");
    return {probabilities_.data() + offsets_[node], degree(node)};
}

std::span<const double> CoauthorGraph::adjacency_probabilities() const {
    if (!normalized_) throw std::logic_error("graph is not normalized");
    return probabilities_;
}

void CoauthorGraph::check_node(NodeId node) const {
    if (node >= node_keys_.size())
        throw std::out_of_range("unknown node id " + std::to_string(node));
}

void CoauthorGraph::rebuild_key_index() {
    key_to_node_.clear();
    key_to_node_.reserve(node_keys_.size());
    for (NodeId i = 0; i < node_keys_.size(); ++i) key_to_node_[node_keys_[i]] = i;
}

void CoauthorGraph::normalize() {
    probabilities_.assign(raw_weights_.size(), 0.0);
    for (std::size_t n = 0; n < node_keys_.size(); ++n) {
        double sum = 0.0;
        for (auto e = offsets_[n]; e < offsets_[n + 1]; ++e) sum += raw_weights_[e];
        if (sum > 0.0)
            for (auto e = offsets_[n]; e < offsets_[n + 1]; ++e)
                probabilities_[e] = raw_weights_[e] / sum;
    }
    normalized_ = true;
}

bool CoauthorGraph::operator==(const CoauthorGraph& other) const {
    return node_keys_ == other.node_keys_ && offsets_ == other.offsets_ &&
           neighbors_ == other.neighbors_ && raw_weights_ == other.raw_weights_ &&
           probabilities_ == other.probabilities_ && normalized_ == other.normalized_;
}

CoauthorGraph CoauthorGraph::from_edges(
    std::vector<AuthorKey> node_keys,
    std::span<const std::tuple<NodeId, NodeId, double>> edges) {
    const auto n = node_keys.size();
    std::vector<Incidence> incidences;
    incidences.reserve(edges.size() * 2);
    for (const auto& [u, v, w] : edges) {
        if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop edge");
        if (!(w > 0.0)) throw std::invalid_argument("edge weight must be positive");
        incidences.push_back({pack(u, v), w});
        incidences.push_back({pack(v, u), w});
    }
    std::sort(incidences.begin(), incidences.end(),
              [](const Incidence& a, const Incidence& b) { return a.pair < b.pair; });
    for (std::size_t i = 1; i < incidences.size(); ++i)
        if (incidences[i].pair == incidences[i - 1].pair)
            throw std::invalid_argument("duplicate edge");

    CoauthorGraph g;
    g.node_keys_ = std::move(node_keys);
    g.rebuild_key_index();
    g.offsets_.assign(n + 1, 0);
    g.neighbors_.reserve(incidences.size());
    g.raw_weights_.reserve(incidences.size());
    for (const auto& inc : incidences) {
        g.neighbors_.push_back(static_cast<NodeId>(inc.pair & 0xffffffffu));
        g.raw_weights_.push_back(inc.addend);
        ++g.offsets_[(inc.pair >> 32) + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) g.offsets_[i] += g.offsets_[i - 1];
    return g;
}

CoauthorGraph build_graph(const Corpus& corpus) {
    // Pass 1: canonical node numbering by sorted author key.
    std::vector<AuthorKey> keys;
    for (const auto& m : corpus.manuscripts)
        keys.insert(keys.end(), m.authors.begin(), m.authors.end());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    CoauthorGraph g;
    g.node_keys_ = std::move(keys);
    g.rebuild_key_index();

    // Pass 2: one incidence per ordered co-author pair per manuscript.
    // Sorting by (pair, addend) before summing makes the weights independent
    // of manuscript order down to the last bit, and emits CSR directly.
    std::vector<Incidence> incidences;
    std::vector<NodeId> ids;
    for (const auto& m : corpus.manuscripts) {
        const int a = m.author_count();
        if (a < 2) continue;
        const double addend = 1.0 / (a - 1);
        ids.clear();
        for (const auto& key : m.authors) ids.push_back(g.key_to_node_.at(key));
        for (NodeId u : ids)
            for (NodeId v : ids)
                if (u != v) incidences.push_back({pack(u, v), addend});
    }
    std::sort(incidences.begin(), incidences.end(),
              [](const Incidence& a, const Incidence& b) {
                  return a.pair != b.pair ? a.pair < b.pair : a.addend < b.addend;
              });

    const auto n = g.node_keys_.size();
    g.offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < incidences.size();) {
        const std::uint64_t pair = incidences[i].pair;
        double weight = 0.0;
        for (; i < incidences.size() && incidences[i].pair == pair; ++i)
            weight += incidences[i].addend;
        g.neighbors_.push_back(static_cast<NodeId>(pair & 0xffffffffu));
        g.raw_weights_.push_back(weight);
        ++g.offsets_[(pair >> 32) + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) g.offsets_[i] += g.offsets_[i - 1];
    return g;
}

std::vector<NodeId> neighborhood(const CoauthorGraph& graph,
                                 std::span<const NodeId> seeds, int radius) {
    if (radius < 0) throw std::invalid_argument("radius must be >= 0");
    std::vector<bool> visited(graph.node_count(), false);
    std::deque<std::pair<NodeId, int>> queue;
    std::vector<NodeId> out;
    for (NodeId s : seeds) {
        if (s >= graph.node_count())
            throw std::out_of_range("unknown node id " + std::to_string(s));
        if (!visited[s]) {
            visited[s] = true;
            out.push_back(s);
            queue.emplace_back(s, 0);
        }
    }
    while (!queue.empty()) {
        auto [node, dist] = queue.front();
        queue.pop_front();
        if (dist == radius) continue;
        for (NodeId nb : graph.neighbors(node)) {
            if (!visited[nb]) {
                visited[nb] = true;
                out.push_back(nb);
                queue.emplace_back(nb, dist + 1);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace refswarm
