#include "refswarm/graph_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

constexpr char kMagic[8] = {'R', 'S', 'W', 'G', 'R', 'P', 'H', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::numeric_limits<double>::is_iec559, "IEEE-754 doubles required");

template <typename T>
T to_little_endian(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<std::byte, sizeof(T)>>(value);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return value;
}

template <typename T>
void write_pod(std::ostream& out, T value) {
    value = to_little_endian(value);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw CorruptionError("truncated graph file");
    return to_little_endian(value);
}

std::string read_bytes(std::istream& in, std::size_t len) {
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    if (!in) throw CorruptionError("truncated graph file");
    return s;
}

}  // namespace

void save_graph(const CoauthorGraph& graph, std::ostream& out) {
    if (!graph.normalized())
        throw std::logic_error("save_graph requires a normalized graph");

    out.write(kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint64_t>(graph.node_count()));
    write_pod(out, graph.undirected_edge_count());

    for (NodeId n = 0; n < graph.node_count(); ++n) {
        const AuthorKey& key = graph.key_of(n);
        write_pod(out, static_cast<std::uint32_t>(key.last.size()));
        out.write(key.last.data(), static_cast<std::streamsize>(key.last.size()));
        write_pod(out, static_cast<std::uint8_t>(key.first));
        write_pod(out, static_cast<std::uint8_t>(key.middle));
    }

    for (NodeId n = 0; n < graph.node_count(); ++n) {
        const auto nbrs = graph.neighbors(n);
        const auto raw = graph.raw_weights(n);
        const auto prob = graph.probabilities(n);
        write_pod(out, static_cast<std::uint32_t>(nbrs.size()));
        for (std::size_t e = 0; e < nbrs.size(); ++e) {
            write_pod(out, nbrs[e]);
            write_pod(out, std::bit_cast<std::uint64_t>(raw[e]));
            write_pod(out, std::bit_cast<std::uint64_t>(prob[e]));
        }
    }
    if (!out) throw Error("graph write failed");
}

CoauthorGraph load_graph(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw FormatError("not a refswarm graph file (bad magic)");
    const auto version = read_pod<std::uint32_t>(in);
    if (version != kVersion)
        throw FormatError("unsupported graph format version " +
                          std::to_string(version));

    const auto node_count = read_pod<std::uint64_t>(in);
    const auto edge_count = read_pod<std::uint64_t>(in);
    if (node_count > std::numeric_limits<NodeId>::max())
        throw CorruptionError("node count out of range");

    CoauthorGraph g;
    g.node_keys_.reserve(node_count);
    for (std::uint64_t n = 0; n < node_count; ++n) {
        const auto len = read_pod<std::uint32_t>(in);
        AuthorKey key;
        key.last = read_bytes(in, len);
        key.first = static_cast<char>(read_pod<std::uint8_t>(in));
        key.middle = static_cast<char>(read_pod<std::uint8_t>(in));
        g.node_keys_.push_back(std::move(key));
    }
    g.rebuild_key_index();

    g.offsets_.assign(node_count + 1, 0);
    for (std::uint64_t n = 0; n < node_count; ++n) {
        const auto degree = read_pod<std::uint32_t>(in);
        g.offsets_[n + 1] = g.offsets_[n] + degree;
        for (std::uint32_t e = 0; e < degree; ++e) {
            const auto nbr = read_pod<NodeId>(in);
            if (nbr >= node_count || nbr == n)
                throw CorruptionError("bad neighbor id in adjacency");
            // neighbors are stored strictly ascending per node
            if (e > 0 && nbr <= g.neighbors_.back())
                throw CorruptionError("adjacency entries out of order");
            g.neighbors_.push_back(nbr);
            g.raw_weights_.push_back(
                std::bit_cast<double>(read_pod<std::uint64_t>(in)));
            g.probabilities_.push_back(
                std::bit_cast<double>(read_pod<std::uint64_t>(in)));
        }
    }
    if (g.neighbors_.size() != edge_count * 2)
        throw CorruptionError("adjacency entries do not match edge count");
    g.normalized_ = true;
    return g;
}

void save_graph_file(const CoauthorGraph& graph, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open graph file for writing: " + path);
    save_graph(graph, out);
}

CoauthorGraph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open graph file: " + path);
    return load_graph(in);
}

}  // namespace refswarm
