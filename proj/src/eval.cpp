#include "refswarm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "refswarm/errors.hpp"

namespace refswarm {

namespace {

BidCode bid_from_int(int value, std::size_t line_no) {
    if (value < 1 || value > 4)
        throw ParseError("bid code must be 1..4, got " + std::to_string(value),
                         line_no);
    return static_cast<BidCode>(value);
}

}  // namespace

std::vector<BidRecord> parse_bids(std::istream& in) {
    std::vector<BidRecord> bids;
    std::set<std::pair<AuthorKey, std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                    : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos)
            throw ParseError("expected member<TAB>manuscript<TAB>bid", line_no);

        BidRecord rec;
        try {
            rec.member = normalize_author_name(line.substr(0, tab1));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        rec.manuscript_id = line.substr(tab1 + 1, tab2 - tab1 - 1);
        if (rec.manuscript_id.empty())
            throw ParseError("empty manuscript id", line_no);

        int code = 0;
        const std::string bid_text = line.substr(tab2 + 1);
        try {
            std::size_t used = 0;
            code = std::stoi(bid_text, &used);
            if (used != bid_text.size()) throw std::invalid_argument(bid_text);
        } catch (const std::exception&) {
            throw ParseError("bad bid code '" + bid_text + "'", line_no);
        }
        rec.bid = bid_from_int(code, line_no);

        if (!seen.insert({rec.member, rec.manuscript_id}).second)
            throw ParseError("duplicate bid for member '" +
                                 render_author_key(rec.member) +
                                 "' on manuscript '" + rec.manuscript_id + "'",
                             line_no);
        bids.push_back(std::move(rec));
    }
    return bids;
}

std::vector<BidRecord> parse_bids_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open bid file: " + path);
    return parse_bids(in);
}

CategorySamples aggregate_energies(
    const std::vector<RefereeRanking>& rankings,
    const std::vector<BidRecord>& bids, const CoauthorGraph& graph,
    const std::set<std::string>& skipped_manuscripts, AggregateCounts* counts) {
    using MembershipMap = std::unordered_map<AuthorKey, double, AuthorKeyHash>;
    std::unordered_map<std::string, MembershipMap> by_manuscript;
    for (const RefereeRanking& r : rankings) {
        MembershipMap& memberships = by_manuscript[r.manuscript_id];
        for (const RankingEntry& e : r.entries) memberships[e.author] = e.membership;
    }

    std::set<std::string> unknown;
    for (const BidRecord& bid : bids)
        if (!by_manuscript.contains(bid.manuscript_id) &&
            !skipped_manuscripts.contains(bid.manuscript_id))
            unknown.insert(bid.manuscript_id);
    if (!unknown.empty()) {
        std::string msg = "bids reference unknown manuscripts:";
        for (const std::string& id : unknown) msg += " '" + id + "'";
        throw ConsistencyError(msg);
    }

    CategorySamples out;
    AggregateCounts tally;
    std::unordered_set<std::string> excluded_members;
    for (const BidRecord& bid : bids) {
        if (graph.find(bid.member) == CoauthorGraph::npos) {
            excluded_members.insert(render_author_key(bid.member));
            continue;
        }
        if (skipped_manuscripts.contains(bid.manuscript_id)) {
            ++tally.bids_on_skipped;
            continue;
        }
        const MembershipMap& memberships = by_manuscript.at(bid.manuscript_id);
        const auto it = memberships.find(bid.member);
        out.of(bid.bid).push_back(it == memberships.end() ? 0.0 : it->second);
        ++tally.bids_used;
    }
    tally.members_not_in_graph = excluded_members.size();
    if (counts) *counts = tally;
    return out;
}

double kolmogorov_sf(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // theta-series for the CDF; converges in a couple of terms here
        const double pi = std::numbers::pi;
        const double f = std::exp(-pi * pi / (8.0 * lambda * lambda));
        double cdf = 0.0;
        for (int j = 1; j < 40; j += 2) {
            const double term = std::pow(f, j * j);
            cdf += term;
            if (term < 1e-18 * cdf) break;
        }
        cdf *= std::sqrt(2.0 * pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sf = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sf += sign * term;
        if (term < 1e-18 * std::abs(sf)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sf, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample requires non-empty samples");

    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() || j < sb.size()) {
        const double x = (i < sa.size() && (j >= sb.size() || sa[i] <= sb[j]))
                             ? sa[i]
                             : sb[j];
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }

    const double effective = na * nb / (na + nb);
    return {d, kolmogorov_sf(std::sqrt(effective) * d)};
}

std::array<std::optional<double>, 4> recall_table(const CategorySamples& samples) {
    std::array<std::optional<double>, 4> out;
    for (std::size_t c = 0; c < 4; ++c) {
        const auto& sample = samples.samples[c];
        if (sample.empty()) continue;
        const auto positive = std::count_if(sample.begin(), sample.end(),
                                            [](double x) { return x > 0.0; });
        out[c] = static_cast<double>(positive) / static_cast<double>(sample.size());
    }
    return out;
}

std::array<std::vector<double>, 4> top_energies(const CategorySamples& samples,
                                                std::size_t n) {
    if (n < 1) throw std::invalid_argument("top_energies requires n >= 1");
    std::array<std::vector<double>, 4> out;
    for (std::size_t c = 0; c < 4; ++c) {
        std::vector<double> values;
        std::copy_if(samples.samples[c].begin(), samples.samples[c].end(),
                     std::back_inserter(values),
                     [](double x) { return x != 1.0; });
        std::sort(values.begin(), values.end(), std::greater<>());
        if (values.size() > n) values.resize(n);
        out[c] = std::move(values);
    }
    return out;
}

namespace {

double sample_mean(const std::vector<double>& sample) {
    if (sample.empty()) return 0.0;
    return std::accumulate(sample.begin(), sample.end(), 0.0) /
           static_cast<double>(sample.size());
}

}  // namespace

OrderingVerdict check_ordering(const CategorySamples& samples, double alpha) {
    for (std::size_t c = 0; c < 4; ++c)
        if (samples.samples[c].empty())
            return {OrderingVerdict::Status::inconclusive,
                    "bid category " + std::to_string(c + 1) + " has no samples"};

    const auto& s1 = samples.of(BidCode::expert_wants_review);
    const auto& s2 = samples.of(BidCode::expert);
    const auto& s3 = samples.of(BidCode::non_expert);

    const double p12 = ks_two_sample(s1, s2).p_value;
    const double p13 = ks_two_sample(s1, s3).p_value;
    const double p23 = ks_two_sample(s2, s3).p_value;
    const double m1 = sample_mean(s1), m2 = sample_mean(s2), m3 = sample_mean(s3);

    std::string reason;
    if (!(p12 > alpha))
        reason = "categories 1 and 2 are separable (p12 <= alpha)";
    else if (!(p13 < alpha))
        reason = "categories 1 and 3 are not separable (p13 >= alpha)";
    else if (!(p23 < alpha))
        reason = "categories 2 and 3 are not separable (p23 >= alpha)";
    else if (!(m1 > m3))
        reason = "mean(1) is not above mean(3)";
    else if (!(m2 > m3))
        reason = "mean(2) is not above mean(3)";

    if (reason.empty()) return {OrderingVerdict::Status::holds, ""};
    return {OrderingVerdict::Status::fails, reason};
}

EvaluationReport evaluate_bids(const std::vector<RefereeRanking>& rankings,
                               const std::vector<BidRecord>& bids,
                               const CoauthorGraph& graph, double alpha,
                               const std::set<std::string>& skipped_manuscripts) {
    EvaluationReport report;
    report.alpha = alpha;
    report.manuscripts_ranked = rankings.size();
    report.manuscripts_skipped = skipped_manuscripts.size();
    report.samples = aggregate_energies(rankings, bids, graph,
                                        skipped_manuscripts, &report.counts);

    const auto recalls = recall_table(report.samples);
    const auto tops = top_energies(report.samples, 5);
    for (std::size_t c = 0; c < 4; ++c) {
        CategoryStats& stats = report.categories[c];
        const auto& sample = report.samples.samples[c];
        stats.count = sample.size();
        stats.total = std::accumulate(sample.begin(), sample.end(), 0.0);
        stats.mean = sample_mean(sample);
        stats.recall = recalls[c];
        stats.top = tops[c];
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) {
                report.ks_statistics[i][j] = 0.0;
                report.ks_p_values[i][j] = 1.0;
            } else if (report.samples.samples[i].empty() ||
                       report.samples.samples[j].empty()) {
                report.ks_statistics[i][j] = nan;
                report.ks_p_values[i][j] = nan;
            } else {
                const KsResult ks = ks_two_sample(report.samples.samples[i],
                                                  report.samples.samples[j]);
                report.ks_statistics[i][j] = ks.statistic;
                report.ks_p_values[i][j] = ks.p_value;
            }
        }
    }

    report.verdict = check_ordering(report.samples, alpha);
    return report;
}

namespace {

std::string fmt(double v, int precision = 4) {
    if (std::isnan(v)) return "-";
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << v;
    return os.str();
}

const char* verdict_name(OrderingVerdict::Status s) {
    switch (s) {
        case OrderingVerdict::Status::holds: return "holds";
        case OrderingVerdict::Status::fails: return "fails";
        default: return "inconclusive";
    }
}

}  // namespace

std::string format_report(const EvaluationReport& report) {
    std::ostringstream os;
    os << "manuscripts ranked: " << report.manuscripts_ranked
       << "  skipped (no seeds): " << report.manuscripts_skipped << "\n";
    os << "bids used: " << report.counts.bids_used
       << "  on skipped manuscripts: " << report.counts.bids_on_skipped
       << "  members not in graph: " << report.counts.members_not_in_graph
       << "\n\n";

    os << "bid  count   total       mean     recall  top energies (1.0 excluded)\n";
    for (std::size_t c = 0; c < 4; ++c) {
        const CategoryStats& s = report.categories[c];
        os << (c + 1) << "    " << s.count;
        os << std::string(s.count < 10 ? 6 : s.count < 100 ? 5 : s.count < 1000 ? 4 : 3, ' ');
        os << fmt(s.total) << "  " << fmt(s.mean) << "  "
           << (s.recall ? fmt(*s.recall, 3) : "-") << "   ";
        for (std::size_t i = 0; i < s.top.size(); ++i)
            os << (i ? " " : "") << fmt(s.top[i], 3);
        os << "\n";
    }

    os << "\nKolmogorov-Smirnov p-values\nbid      1        2        3        4\n";
    for (std::size_t i = 0; i < 4; ++i) {
        os << (i + 1) << "   ";
        for (std::size_t j = 0; j < 4; ++j) {
            const double p = report.ks_p_values[i][j];
            std::string cell = std::isnan(p) ? "-" : p < 0.001 ? "<0.001" : fmt(p, 4);
            os << "  " << cell << std::string(cell.size() < 7 ? 7 - cell.size() : 0, ' ');
        }
        os << "\n";
    }

    os << "\nordering verdict (alpha=" << fmt(report.alpha, 3)
       << "): " << verdict_name(report.verdict.status);
    if (!report.verdict.reason.empty()) os << " (" << report.verdict.reason << ")";
    os << "\n";
    return os.str();
}

std::string report_to_json(const EvaluationReport& report) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["alpha"] = report.alpha;
    j["manuscripts_ranked"] = report.manuscripts_ranked;
    j["manuscripts_skipped"] = report.manuscripts_skipped;
    j["bids_used"] = report.counts.bids_used;
    j["bids_on_skipped_manuscripts"] = report.counts.bids_on_skipped;
    j["members_not_in_graph"] = report.counts.members_not_in_graph;

    ordered_json categories = ordered_json::array();
    for (std::size_t c = 0; c < 4; ++c) {
        const CategoryStats& s = report.categories[c];
        ordered_json cat;
        cat["bid"] = c + 1;
        cat["count"] = s.count;
        cat["total_energy"] = s.total;
        cat["mean_energy"] = s.mean;
        if (s.recall)
            cat["recall"] = *s.recall;
        else
            cat["recall"] = nullptr;
        cat["top_energies"] = s.top;
        categories.push_back(std::move(cat));
    }
    j["categories"] = std::move(categories);

    auto matrix_json = [](const std::array<std::array<double, 4>, 4>& m) {
        ordered_json rows = ordered_json::array();
        for (const auto& row : m) {
            ordered_json r = ordered_json::array();
            for (double v : row) {
                if (std::isnan(v))
                    r.push_back(nullptr);
                else
                    r.push_back(v);
            }
            rows.push_back(std::move(r));
        }
        return rows;
    };
    j["ks_p_values"] = matrix_json(report.ks_p_values);
    j["ks_statistics"] = matrix_json(report.ks_statistics);

    ordered_json verdict;
    verdict["status"] = verdict_name(report.verdict.status);
    verdict["reason"] = report.verdict.reason;
    j["ordering"] = std::move(verdict);
    return j.dump(2);
}

}  // namespace refswarm
