#include "agree/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace agree::metrics {

std::optional<std::size_t> rank_of_gold(const RankedPrediction& p) {
    for (std::size_t i = 0; i < p.entities.size(); ++i)
        if (p.entities[i] == p.eval_case.gold) return i + 1;
    return std::nullopt;
}

double hits_at_n(const std::vector<RankedPrediction>& preds, std::size_t n) {
    if (preds.empty()) throw std::invalid_argument("hits_at_n: no predictions");
    if (n < 1) throw std::invalid_argument("hits_at_n: n must be >= 1");
    std::size_t hit = 0;
    for (const auto& p : preds) {
        auto r = rank_of_gold(p);
        if (r && *r <= n) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(preds.size());
}

double mrr(const std::vector<RankedPrediction>& preds) {
    if (preds.empty()) throw std::invalid_argument("mrr: no predictions");
    double sum = 0.0;
    for (const auto& p : preds) {
        auto r = rank_of_gold(p);
        if (r) sum += 1.0 / static_cast<double>(*r);
    }
    return sum / static_cast<double>(preds.size());
}

RaHitsResult relation_aware_hits(const std::vector<RankedPrediction>& preds,
                                 const kg::RelationCardinalityTable& table,
                                 std::size_t n, RaHitsOptions opts) {
    if (n < 1)
        throw std::invalid_argument("relation_aware_hits: n must be >= 1");
    RaHitsResult res;
    std::vector<RankedPrediction> valid;
    for (const auto& p : preds) {
        auto card = table.cardinality(p.eval_case.query.relation,
                                      p.eval_case.query.direction);
        if (!card) {
            ++res.unsupported;
            continue;
        }
        bool in = opts.literal_rule ? n <= *card : *card <= n;
        if (in) valid.push_back(p);
    }
    res.metric.support = valid.size();
    if (valid.empty()) {
        res.metric.defined = false;
        return res;
    }
    res.metric.value = hits_at_n(valid, n);
    return res;
}

RetrieverUsage retriever_usage(const std::vector<agent::Trajectory>& trajectories) {
    RetrieverUsage usage;
    usage.cases = trajectories.size();
    for (const auto& t : trajectories) {
        usage.basic_calls += t.tools_used.basic;
        usage.advanced_calls += t.tools_used.advanced;
        if (t.tools_used.total() == 0) ++usage.no_retrieval_cases;
    }
    return usage;
}

MetricReport score(const std::vector<RankedPrediction>& preds,
                   const kg::RelationCardinalityTable& table,
                   const std::vector<std::size_t>& metrics_n,
                   RaHitsOptions opts) {
    MetricReport report;
    report.case_count = preds.size();
    if (preds.empty()) return report;
    for (auto n : metrics_n) {
        report.hits[n] = {hits_at_n(preds, n), preds.size(), true};
        auto ra = relation_aware_hits(preds, table, n, opts);
        report.ra_hits[n] = ra.metric;
        report.ra_unsupported[n] = ra.unsupported;
    }
    report.mrr = mrr(preds);
    return report;
}

namespace {

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", v * 100.0);
    return buf;
}

}  // namespace

std::string render_report(const MetricReport& report) {
    std::string out;
    out += "cases: " + std::to_string(report.case_count) + "\n";
    out += "metric        N      value    support\n";
    for (const auto& [n, v] : report.hits) {
        char line[96];
        std::snprintf(line, sizeof line, "hits       %4zu    %7s   %8zu\n", n,
                      pct(v.value).c_str(), v.support);
        out += line;
    }
    {
        char line[96];
        std::snprintf(line, sizeof line, "mrr           -    %7.1f   %8zu\n",
                      report.mrr * 100.0, report.case_count);
        out += line;
    }
    for (const auto& [n, v] : report.ra_hits) {
        char line[96];
        if (v.defined)
            std::snprintf(line, sizeof line, "ra-hits    %4zu    %7s   %8zu\n",
                          n, pct(v.value).c_str(), v.support);
        else
            std::snprintf(line, sizeof line, "ra-hits    %4zu        n/a   %8zu\n",
                          n, v.support);
        out += line;
    }
    return out;
}

}  // namespace agree::metrics
