#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "refswarm/authors.hpp"
#include "refswarm/graph.hpp"
#include "refswarm/referee.hpp"

namespace refswarm {

// Reviewer bid codes:
//   1 = expert in the domain and wants to review
//   2 = expert in the domain
//   3 = not an expert
//   4 = conflict of interest
enum class BidCode : int {
    expert_wants_review = 1,
    expert = 2,
    non_expert = 3,
    conflict = 4,
};

struct BidRecord {
    AuthorKey member;
    std::string manuscript_id;
    BidCode bid;

    bool operator==(const BidRecord&) const = default;
};

// Line format: member_name<TAB>manuscript_id<TAB>bid_code. At most one bid
// per (member, manuscript) pair. Throws ParseError with line numbers.
std::vector<BidRecord> parse_bids(std::istream& in);
std::vector<BidRecord> parse_bids_file(const std::string& path);

// Per-bid-category membership-energy samples, one value per (member,
// manuscript) bid: the member's membership weight in that manuscript's
// ranking, or 0 when the swarm never reached them. Members absent from the
// graph contribute nothing; bids on `skipped_manuscripts` (unrankable ones)
// are dropped. A bid naming a manuscript that is neither ranked nor skipped
// is a ConsistencyError listing the offenders.
struct CategorySamples {
    std::array<std::vector<double>, 4> samples;  // index = bid code - 1

    std::vector<double>& of(BidCode code) {
        return samples[static_cast<std::size_t>(code) - 1];
    }
    const std::vector<double>& of(BidCode code) const {
        return samples[static_cast<std::size_t>(code) - 1];
    }
};

struct AggregateCounts {
    std::size_t bids_used = 0;
    std::size_t bids_on_skipped = 0;
    std::size_t members_not_in_graph = 0;  // distinct members
};

CategorySamples aggregate_energies(
    const std::vector<RefereeRanking>& rankings,
    const std::vector<BidRecord>& bids, const CoauthorGraph& graph,
    const std::set<std::string>& skipped_manuscripts = {},
    AggregateCounts* counts = nullptr);

// Survival function of the asymptotic Kolmogorov distribution,
//   Q(lambda) = 2 * sum_{j>=1} (-1)^(j-1) * exp(-2 j^2 lambda^2),
// evaluated through the dual theta-series for small lambda.
double kolmogorov_sf(double lambda);

struct KsResult {
    double statistic;  // D = sup |ECDF_a - ECDF_b|
    double p_value;    // Q(sqrt(n_a*n_b/(n_a+n_b)) * D)
};

// Two-sample Kolmogorov-Smirnov test (asymptotic p-value, see
// kolmogorov_sf). Ties are handled exactly; throws std::invalid_argument on
// an empty sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Fraction of bids in each category whose member received strictly positive
// energy. Empty categories are reported as absent.
std::array<std::optional<double>, 4> recall_table(const CategorySamples& samples);

// Top n energies per category after removing entries at exactly 1.0 (the
// trivially self-matched referees).
std::array<std::vector<double>, 4> top_energies(const CategorySamples& samples,
                                                std::size_t n);

// Checks the expected expert/non-expert energy ordering: categories 1 and 2
// indistinguishable (KS p > alpha), both separated from category 3
// (KS p < alpha) with higher means.
struct OrderingVerdict {
    enum class Status { holds, fails, inconclusive };
    Status status;
    std::string reason;  // empty when the ordering holds
};

OrderingVerdict check_ordering(const CategorySamples& samples, double alpha = 0.05);

struct CategoryStats {
    std::size_t count = 0;
    double total = 0.0;
    double mean = 0.0;
    std::optional<double> recall;
    std::vector<double> top;  // top 5, 1.0-entries excluded
};

struct EvaluationReport {
    double alpha = 0.05;
    std::size_t manuscripts_ranked = 0;
    std::size_t manuscripts_skipped = 0;
    AggregateCounts counts;
    CategorySamples samples;
    std::array<CategoryStats, 4> categories;
    // [i][j] for bid codes i+1 vs j+1; NaN when either category is empty.
    std::array<std::array<double, 4>, 4> ks_p_values{};
    std::array<std::array<double, 4>, 4> ks_statistics{};
    OrderingVerdict verdict;
};

EvaluationReport evaluate_bids(const std::vector<RefereeRanking>& rankings,
                               const std::vector<BidRecord>& bids,
                               const CoauthorGraph& graph, double alpha = 0.05,
                               const std::set<std::string>& skipped_manuscripts = {});

// Human-readable report (fixed-width tables).
std::string format_report(const EvaluationReport& report);
// Machine-readable single-object JSON mirror of the report.
std::string report_to_json(const EvaluationReport& report);

}  // namespace refswarm
