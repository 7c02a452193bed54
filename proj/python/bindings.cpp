#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "refswarm/corpus.hpp"
#include "refswarm/errors.hpp"
#include "refswarm/eval.hpp"
#include "refswarm/graph.hpp"
#include "refswarm/graph_io.hpp"
#include "refswarm/referee.hpp"
#include "refswarm/swarm.hpp"
#include "refswarm/synth.hpp"

namespace py = pybind11;
using namespace refswarm;

namespace {

ManuscriptRecord make_manuscript(const std::string& id,
                                 const std::vector<std::string>& authors,
                                 const std::vector<std::string>& references) {
    ManuscriptRecord rec;
    rec.id = id;
    for (const auto& a : authors) rec.authors.push_back(normalize_author_name(a));
    for (const auto& r : references)
        rec.referenced_authors.push_back(normalize_author_name(r));
    return rec;
}

}  // namespace

PYBIND11_MODULE(refswarm, m) {
    m.doc() = "Candidate peer-reviewer ranking over co-authorship networks";

    py::register_exception<NoSeedsError>(m, "NoSeedsError");
    py::register_exception<NoEnergyError>(m, "NoEnergyError");
    py::register_exception<ParseError>(m, "CorpusParseError");

    py::class_<AuthorKey>(m, "AuthorKey")
        .def_readonly("last", &AuthorKey::last)
        .def_property_readonly("first",
                               [](const AuthorKey& k) {
                                   return k.first ? std::string(1, k.first) : "";
                               })
        .def_property_readonly("middle",
                               [](const AuthorKey& k) {
                                   return k.middle ? std::string(1, k.middle) : "";
                               })
        .def("__eq__", [](const AuthorKey& a, const AuthorKey& b) { return a == b; })
        .def("__hash__", [](const AuthorKey& k) { return AuthorKeyHash{}(k); })
        .def("__str__", &render_author_key)
        .def("__repr__", [](const AuthorKey& k) {
            return "AuthorKey('" + render_author_key(k) + "')";
        });

    m.def("normalize_author_name", &normalize_author_name, py::arg("raw"));
    m.def("render_author_key", &render_author_key, py::arg("key"));

    py::class_<ManuscriptRecord>(m, "ManuscriptRecord")
        .def(py::init(&make_manuscript), py::arg("id"), py::arg("authors"),
             py::arg("references") = std::vector<std::string>{})
        .def_readonly("id", &ManuscriptRecord::id)
        .def_readonly("authors", &ManuscriptRecord::authors)
        .def_readonly("referenced_authors", &ManuscriptRecord::referenced_authors);

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("manuscripts", &Corpus::manuscripts)
        .def("__len__", [](const Corpus& c) { return c.manuscripts.size(); });

    m.def("parse_corpus", &parse_corpus_string, py::arg("text"));
    m.def("parse_corpus_file", &parse_corpus_file, py::arg("path"));
    m.def("write_corpus", &write_corpus_string, py::arg("corpus"));

    py::class_<CoauthorGraph>(m, "CoauthorGraph")
        .def_property_readonly("node_count", &CoauthorGraph::node_count)
        .def_property_readonly("edge_count", &CoauthorGraph::undirected_edge_count)
        .def("normalize", &CoauthorGraph::normalize)
        .def("find",
             [](const CoauthorGraph& g, const std::string& name) -> py::object {
                 const NodeId node = g.find(normalize_author_name(name));
                 if (node == CoauthorGraph::npos) return py::none();
                 return py::cast(node);
             },
             py::arg("name"))
        .def("key_of", &CoauthorGraph::key_of, py::arg("node"))
        .def("degree", &CoauthorGraph::degree, py::arg("node"))
        .def("neighbors",
             [](const CoauthorGraph& g, NodeId node) {
                 const auto span = g.neighbors(node);
                 return std::vector<NodeId>(span.begin(), span.end());
             },
             py::arg("node"))
        .def("neighborhood",
             [](const CoauthorGraph& g, const std::vector<NodeId>& seeds, int radius) {
                 return neighborhood(g, seeds, radius);
             },
             py::arg("seeds"), py::arg("radius"));

    m.def("build_graph",
          [](const Corpus& corpus) {
              CoauthorGraph g = build_graph(corpus);
              g.normalize();
              return g;
          },
          py::arg("corpus"), "Build and normalize the co-authorship graph");
    m.def("save_graph", &save_graph_file, py::arg("graph"), py::arg("path"));
    m.def("load_graph", &load_graph_file, py::arg("path"));

    py::enum_<PropagationMode>(m, "PropagationMode")
        .value("monte_carlo", PropagationMode::monte_carlo)
        .value("expectation", PropagationMode::expectation);

    py::class_<SwarmConfig>(m, "SwarmConfig")
        .def(py::init<>())
        .def_readwrite("particles_per_reference", &SwarmConfig::particles_per_reference)
        .def_readwrite("initial_energy", &SwarmConfig::initial_energy)
        .def_readwrite("decay", &SwarmConfig::decay)
        .def_readwrite("max_steps", &SwarmConfig::max_steps)
        .def_readwrite("rng_seed", &SwarmConfig::rng_seed)
        .def_readwrite("mode", &SwarmConfig::mode)
        .def_readwrite("threads", &SwarmConfig::threads);

    py::class_<BlackoutConfig>(m, "BlackoutConfig")
        .def(py::init<>())
        .def_readwrite("enabled", &BlackoutConfig::enabled)
        .def_readwrite("blackout_energy", &BlackoutConfig::blackout_energy)
        .def_readwrite("blackout_decay", &BlackoutConfig::blackout_decay)
        .def_readwrite("blackout_steps", &BlackoutConfig::blackout_steps)
        .def_readwrite("particles_per_author", &BlackoutConfig::particles_per_author);

    m.def("propagate_expectation",
          [](const std::map<NodeId, int>& seeds, const CoauthorGraph& graph,
             const SwarmConfig& config) {
              SeedMultiset multiset(seeds.begin(), seeds.end());
              const EnergyVector e = propagate_expectation(multiset, graph, config);
              std::map<NodeId, double> out;
              for (const auto& [node, value] : e.sorted_entries()) out[node] = value;
              return out;
          },
          py::arg("seeds"), py::arg("graph"), py::arg("config") = SwarmConfig{});

    py::class_<RankingEntry>(m, "RankingEntry")
        .def_readonly("author", &RankingEntry::author)
        .def_readonly("raw_energy", &RankingEntry::raw_energy)
        .def_readonly("membership", &RankingEntry::membership);

    py::class_<RefereeRanking>(m, "RefereeRanking")
        .def_readonly("manuscript_id", &RefereeRanking::manuscript_id)
        .def_readonly("missing_references", &RefereeRanking::missing_references)
        .def_readonly("entries", &RefereeRanking::entries)
        .def("to_json", &ranking_to_json);

    m.def("rank_referees", &rank_referees, py::arg("manuscript"), py::arg("graph"),
          py::arg("config") = SwarmConfig{}, py::arg("blackout") = BlackoutConfig{});
    m.def("exclude_authors", &exclude_authors, py::arg("ranking"),
          py::arg("manuscript"));

    m.def("ks_two_sample",
          [](const std::vector<double>& a, const std::vector<double>& b) {
              const KsResult r = ks_two_sample(a, b);
              return py::make_tuple(r.statistic, r.p_value);
          },
          py::arg("a"), py::arg("b"),
          "Two-sample Kolmogorov-Smirnov test -> (D, asymptotic p)");

    py::class_<BidRecord>(m, "BidRecord")
        .def_readonly("member", &BidRecord::member)
        .def_readonly("manuscript_id", &BidRecord::manuscript_id)
        .def_property_readonly("bid", [](const BidRecord& b) {
            return static_cast<int>(b.bid);
        });

    m.def("parse_bids_file", &parse_bids_file, py::arg("path"));
    m.def("evaluate_bids",
          [](const std::vector<RefereeRanking>& rankings,
             const std::vector<BidRecord>& bids, const CoauthorGraph& graph,
             double alpha, const std::set<std::string>& skipped) {
              return report_to_json(evaluate_bids(rankings, bids, graph, alpha, skipped));
          },
          py::arg("rankings"), py::arg("bids"), py::arg("graph"),
          py::arg("alpha") = 0.05, py::arg("skipped") = std::set<std::string>{},
          "Run the bid-code evaluation and return the JSON report");
}
