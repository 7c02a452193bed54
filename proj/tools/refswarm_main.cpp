#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "refswarm/corpus.hpp"
#include "refswarm/errors.hpp"
#include "refswarm/eval.hpp"
#include "refswarm/graph.hpp"
#include "refswarm/graph_io.hpp"
#include "refswarm/referee.hpp"
#include "refswarm/swarm.hpp"
#include "refswarm/synth.hpp"

namespace {

using namespace refswarm;

// Exit codes (also in README): 1 I/O or internal, 2 parse/format,
// 3 no seeds, 4 no energy, 5 inconsistent inputs.
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitNoSeeds = 3;
constexpr int kExitNoEnergy = 4;
constexpr int kExitInconsistent = 5;

int g_verbosity = 0;

void log_info(const std::string& msg) {
    if (g_verbosity > 0) std::cerr << "[refswarm] " << msg << "\n";
}

struct SwarmFlags {
    SwarmConfig config;
    BlackoutConfig blackout;
    std::string mode = "monte_carlo";
};

void add_swarm_flags(CLI::App* cmd, SwarmFlags& flags) {
    cmd->add_option("--particles", flags.config.particles_per_reference,
                    "Particles per reference occurrence")
        ->capture_default_str();
    cmd->add_option("--initial-energy", flags.config.initial_energy,
                    "Initial particle energy")
        ->capture_default_str();
    cmd->add_option("--decay", flags.config.decay, "Per-step energy decay in [0,1]")
        ->capture_default_str();
    cmd->add_option("--steps", flags.config.max_steps, "Propagation step bound k")
        ->capture_default_str();
    cmd->add_option("--seed", flags.config.rng_seed, "RNG seed")
        ->capture_default_str();
    cmd->add_option("--mode", flags.mode, "Propagation mode")
        ->check(CLI::IsMember({"monte_carlo", "expectation"}))
        ->capture_default_str();
    cmd->add_option("--threads", flags.config.threads,
                    "Worker threads (0 = all cores); never changes results")
        ->envname("REFSWARM_THREADS")
        ->capture_default_str();
    cmd->add_flag("--blackout", flags.blackout.enabled,
                  "Cancel energy around the manuscript's own authors");
    cmd->add_option("--blackout-energy", flags.blackout.blackout_energy,
                    "Negative particle energy")
        ->capture_default_str();
    cmd->add_option("--blackout-decay", flags.blackout.blackout_decay,
                    "Negative swarm decay")
        ->capture_default_str();
    cmd->add_option("--blackout-steps", flags.blackout.blackout_steps,
                    "Cancelled neighborhood radius (0 disables)")
        ->capture_default_str();
    cmd->add_option("--blackout-particles", flags.blackout.particles_per_author,
                    "Negative particles per author node")
        ->capture_default_str();
}

SwarmConfig finish_config(SwarmFlags& flags) {
    flags.config.mode = flags.mode == "expectation" ? PropagationMode::expectation
                                                    : PropagationMode::monte_carlo;
    flags.config.validate();
    if (flags.blackout.enabled) flags.blackout.validate();
    return flags.config;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

int run_build_graph(const std::string& corpus_path, const std::string& graph_path) {
    const Corpus corpus = parse_corpus_file(corpus_path);
    CoauthorGraph graph = build_graph(corpus);
    graph.normalize();
    save_graph_file(graph, graph_path);

    std::size_t multi = 0, total_refs = 0, resolved_refs = 0, with_seed = 0;
    std::set<AuthorKey> unresolved;
    for (const auto& m : corpus.manuscripts) {
        if (m.author_count() >= 2) ++multi;
        bool any = false;
        for (const auto& ref : m.referenced_authors) {
            ++total_refs;
            if (graph.find(ref) != CoauthorGraph::npos) {
                ++resolved_refs;
                any = true;
            } else {
                unresolved.insert(ref);
            }
        }
        if (any) ++with_seed;
    }

    std::cout << "manuscripts: " << corpus.manuscripts.size() << " (multi-author: "
              << multi << ")\n";
    std::cout << "author nodes: " << graph.node_count() << "\n";
    std::cout << "co-authorship edges: " << graph.undirected_edge_count()
              << " undirected (" << graph.adjacency_entries()
              << " directed entries)\n";
    std::cout << "reference entries: " << total_refs << ", resolved in graph: "
              << resolved_refs << ", distinct unresolved authors: "
              << unresolved.size() << "\n";
    std::cout << "manuscripts with at least one resolvable reference: " << with_seed
              << "\n";
    std::cout << "graph written to " << graph_path << "\n";
    return 0;
}

int run_rank(const std::string& graph_path, const std::string& manuscripts_path,
             const std::string& out_path, const std::string& manuscript_id,
             SwarmFlags& flags, bool exclude_own_authors,
             const std::string& energies_path) {
    const SwarmConfig config = finish_config(flags);
    const CoauthorGraph graph = load_graph_file(graph_path);
    const Corpus manuscripts = parse_corpus_file(manuscripts_path);

    std::vector<const ManuscriptRecord*> selected;
    for (const auto& m : manuscripts.manuscripts)
        if (manuscript_id.empty() || m.id == manuscript_id) selected.push_back(&m);
    if (selected.empty())
        throw ConsistencyError(manuscript_id.empty()
                                   ? "no manuscripts in input"
                                   : "manuscript '" + manuscript_id + "' not found");
    if (!energies_path.empty() && selected.size() != 1)
        throw ConsistencyError("--emit-energies requires a single manuscript "
                               "(use --manuscript-id)");

    std::string output;
    for (const ManuscriptRecord* m : selected) {
        RefereeRanking ranking = rank_referees(*m, graph, config, flags.blackout);
        if (exclude_own_authors) ranking = exclude_authors(std::move(ranking), *m);
        for (const AuthorKey& a : ranking.authors_not_in_graph)
            std::cerr << "warning: author '" << render_author_key(a)
                      << "' of manuscript '" << m->id << "' is not in the graph; "
                      << "blackout seed skipped\n";
        log_info("ranked '" + m->id + "': " + std::to_string(ranking.entries.size()) +
                 " candidates, " + std::to_string(ranking.missing_references.size()) +
                 " unresolved references");
        output += ranking_to_json(ranking);
        output += '\n';
        if (!energies_path.empty()) {
            EnergyVector energies;
            for (const RankingEntry& e : ranking.entries)
                energies.add(graph.find(e.author), e.raw_energy);
            write_text_file(energies_path, export_energies(energies, graph));
        }
    }
    if (out_path.empty())
        std::cout << output;
    else
        write_text_file(out_path, output);
    return 0;
}

int run_evaluate(const std::string& graph_path, const std::string& manuscripts_path,
                 const std::string& bids_path, const std::string& out_path,
                 SwarmFlags& flags, double alpha, bool exclude_own_authors,
                 const std::string& distributions_prefix) {
    const SwarmConfig config = finish_config(flags);
    const CoauthorGraph graph = load_graph_file(graph_path);
    const Corpus manuscripts = parse_corpus_file(manuscripts_path);
    const std::vector<BidRecord> bids = parse_bids_file(bids_path);
    if (bids.empty()) throw ConsistencyError("no bids in " + bids_path);

    std::set<std::string> bid_ids;
    for (const BidRecord& b : bids) bid_ids.insert(b.manuscript_id);
    std::set<std::string> known_ids;
    for (const auto& m : manuscripts.manuscripts) known_ids.insert(m.id);
    std::set<std::string> unknown;
    for (const std::string& id : bid_ids)
        if (!known_ids.contains(id)) unknown.insert(id);
    if (!unknown.empty()) {
        std::string msg = "bids reference manuscripts missing from " +
                          manuscripts_path + ":";
        for (const std::string& id : unknown) msg += " '" + id + "'";
        throw ConsistencyError(msg);
    }

    std::vector<RefereeRanking> rankings;
    std::set<std::string> skipped;
    for (const auto& m : manuscripts.manuscripts) {
        if (!bid_ids.contains(m.id)) continue;
        try {
            RefereeRanking ranking = rank_referees(m, graph, config, flags.blackout);
            if (exclude_own_authors) ranking = exclude_authors(std::move(ranking), m);
            rankings.push_back(std::move(ranking));
        } catch (const NoSeedsError&) {
            log_info("skipping '" + m.id + "': no referenced authors in graph");
            skipped.insert(m.id);
        } catch (const NoEnergyError&) {
            // Rankable but empty (e.g. fully blacked out): every bid on it
            // scores 0 rather than being dropped.
            RefereeRanking empty;
            empty.manuscript_id = m.id;
            empty.config = config;
            empty.blackout = flags.blackout;
            rankings.push_back(std::move(empty));
        }
    }

    const EvaluationReport report =
        evaluate_bids(rankings, bids, graph, alpha, skipped);
    std::cout << format_report(report);
    if (!out_path.empty()) write_text_file(out_path, report_to_json(report));

    if (!distributions_prefix.empty()) {
        constexpr int kBins = 20;
        for (std::size_t c = 0; c < 4; ++c) {
            std::vector<std::size_t> bins(kBins, 0);
            for (double v : report.samples.samples[c]) {
                int bin = static_cast<int>(v * kBins);
                bin = std::clamp(bin, 0, kBins - 1);
                ++bins[static_cast<std::size_t>(bin)];
            }
            std::string content;
            for (int b = 0; b < kBins; ++b) {
                content += std::to_string(static_cast<double>(b) / kBins);
                content += '\t';
                content += std::to_string(static_cast<double>(b + 1) / kBins);
                content += '\t';
                content += std::to_string(bins[static_cast<std::size_t>(b)]);
                content += '\n';
            }
            write_text_file(distributions_prefix + "-bid" + std::to_string(c + 1) +
                                ".tsv",
                            content);
        }
    }
    return 0;
}

int run_synth(const std::string& out_dir, synth::PlantedParams params) {
    const synth::PlantedBundle bundle = synth::planted_community(params);
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/corpus.jsonl", write_corpus_string(bundle.background));
    write_text_file(out_dir + "/submissions.jsonl",
                    write_corpus_string(bundle.submissions));
    std::string bids;
    for (const BidRecord& b : bundle.bids) {
        bids += render_author_key(b.member);
        bids += '\t';
        bids += b.manuscript_id;
        bids += '\t';
        bids += std::to_string(static_cast<int>(b.bid));
        bids += '\n';
    }
    write_text_file(out_dir + "/bids.tsv", bids);
    std::cout << "wrote " << bundle.background.manuscripts.size()
              << " background manuscripts, " << bundle.submissions.manuscripts.size()
              << " submissions, " << bundle.bids.size() << " bids to " << out_dir
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Candidate peer-reviewer ranking over co-authorship networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI/TOML file");
    app.add_flag("-v,--verbose", g_verbosity, "More logging on stderr");
    app.footer("Exit codes: 0 success, 1 I/O or internal error, 2 parse/format "
               "error,\n3 no referenced author in graph, 4 no positive energy, "
               "5 inconsistent inputs.");

    // build-graph
    std::string corpus_path, graph_path;
    CLI::App* build = app.add_subcommand(
        "build-graph", "Build a normalized co-authorship graph from a corpus");
    build->add_option("corpus", corpus_path, "Corpus file (JSON lines)")->required();
    build->add_option("-o,--output", graph_path, "Graph output file")->required();

    // rank
    SwarmFlags rank_flags;
    std::string rank_graph, rank_manuscripts, rank_out, rank_id, rank_energies;
    bool rank_exclude = false;
    CLI::App* rank = app.add_subcommand(
        "rank", "Rank candidate referees for manuscripts");
    rank->add_option("graph", rank_graph, "Graph file")->required();
    rank->add_option("manuscripts", rank_manuscripts,
                     "Manuscript records (JSON lines)")
        ->required();
    rank->add_option("-o,--output", rank_out, "Write rankings here (default stdout)");
    rank->add_option("--manuscript-id", rank_id, "Rank only this manuscript");
    rank->add_flag("--exclude-authors", rank_exclude,
                   "Drop the manuscript's own authors from the ranking");
    rank->add_option("--emit-energies", rank_energies,
                     "Also write an author<TAB>energy file (single manuscript)");
    add_swarm_flags(rank, rank_flags);

    // evaluate
    SwarmFlags eval_flags;
    std::string eval_graph, eval_manuscripts, eval_bids, eval_out, eval_dist;
    double alpha = 0.05;
    bool eval_exclude = false;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Compare rankings against reviewer bids");
    evaluate->add_option("graph", eval_graph, "Graph file")->required();
    evaluate->add_option("manuscripts", eval_manuscripts,
                         "Manuscript records (JSON lines)")
        ->required();
    evaluate->add_option("bids", eval_bids, "Bid file (TSV)")->required();
    evaluate->add_option("-o,--output", eval_out, "Write the JSON report here");
    evaluate->add_option("--alpha", alpha, "Significance level for the ordering check")
        ->capture_default_str();
    evaluate->add_flag("--exclude-authors", eval_exclude,
                       "Drop each manuscript's own authors before aggregating");
    evaluate->add_option("--emit-distributions", eval_dist,
                         "Write per-category energy histograms to PREFIX-bidN.tsv");
    add_swarm_flags(evaluate, eval_flags);

    // synth
    synth::PlantedParams synth_params;
    std::string synth_dir;
    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "Generate a synthetic corpus/submissions/bids bundle");
    synth_cmd->add_option("outdir", synth_dir, "Output directory")->required();
    synth_cmd->add_option("--seed", synth_params.seed, "Generator seed")
        ->capture_default_str();
    synth_cmd->add_option("--field-authors", synth_params.field_authors)
        ->capture_default_str();
    synth_cmd->add_option("--field-papers", synth_params.field_papers)
        ->capture_default_str();
    synth_cmd->add_option("--experts", synth_params.experts)->capture_default_str();
    synth_cmd->add_option("--non-experts", synth_params.non_experts)
        ->capture_default_str();
    synth_cmd->add_option("--submissions", synth_params.submissions)
        ->capture_default_str();
    synth_cmd->add_option("--refs", synth_params.refs_per_submission)
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return run_build_graph(corpus_path, graph_path);
        if (rank->parsed())
            return run_rank(rank_graph, rank_manuscripts, rank_out, rank_id,
                            rank_flags, rank_exclude, rank_energies);
        if (evaluate->parsed())
            return run_evaluate(eval_graph, eval_manuscripts, eval_bids, eval_out,
                                eval_flags, alpha, eval_exclude, eval_dist);
        if (synth_cmd->parsed()) return run_synth(synth_dir, synth_params);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CorruptionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const NoSeedsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoSeeds;
    } catch (const NoEnergyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoEnergy;
    } catch (const ConsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return 0;
}
