// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <thread>

namespace ledgersim::bench {

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Issue: return "issue";
        case Phase::Pay: return "pay";
        case Phase::Both: return "both";
    }
    return "?";
}

void BenchConfig::validate() const {
    if (cl < 10 || cl > 100)
        throw LedgerError(Errc::ConfigViolation,
                          "clients must satisfy 10 <= cl <= 100 (got " + std::to_string(cl) + ")");
    if (vol < 10 || vol > 100)
        throw LedgerError(Errc::ConfigViolation,
                          "items per invoice must satisfy 10 <= vol <= 100 (got " +
                              std::to_string(vol) + ")");
    if (tx < 1 || tx > 10000)
        throw LedgerError(Errc::ConfigViolation,
                          "transaction load must satisfy 1 <= tx <= 10000 (got " +
                              std::to_string(tx) + ")");
    if (tx % cl != 0)
        throw LedgerError(Errc::ConfigViolation,
                          "tx must divide evenly over the clients (tx=" + std::to_string(tx) +
                              ", cl=" + std::to_string(cl) + ")");
    if (repetitions < 1)
        throw LedgerError(Errc::ConfigViolation, "repetitions must be at least 1");
}

const PhaseStats* MetricsReport::aggregate(const std::string& phase) const {
    for (const auto& row : aggregates)
        if (row.phase == phase) return &row;
    return nullptr;
}

std::vector<ItemLine> gen_shopping_list(int vol, std::mt19937_64& rng,
                                        const contracts::VatRateTable& table) {
    if (vol < 1) throw LedgerError(Errc::InvalidVol, "vol must be at least 1");
    std::vector<std::string> classes;
    classes.reserve(table.rates().size());
    for (const auto& [item, rate] : table.rates()) classes.push_back(item);
    std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
    std::uniform_int_distribution<Amount> price(100, 10000);
    std::vector<ItemLine> lines;
    lines.reserve(static_cast<std::size_t>(vol));
    for (int i = 0; i < vol; ++i) {
        const auto& item = classes[pick(rng)];
        lines.push_back({item, price(rng), 1, table.rate_for(item)});
    }
    return lines;
}

PhaseStats compute_metrics(std::span<const TxRecord> records) {
    if (records.empty())
        throw LedgerError(Errc::EmptyRecords, "no records to aggregate");

    PhaseStats stats;
    std::vector<double> latencies;
    std::int64_t first_submit = std::numeric_limits<std::int64_t>::max();
    std::int64_t last_notarized = 0;
    for (const auto& rec : records) {
        if (!rec.ok) {
            ++stats.rejected;
            continue;
        }
        if (rec.notarized_at_ns < rec.submitted_at_ns)
            throw LedgerError(Errc::ParseError, "corrupt record: negative latency");
        first_submit = std::min(first_submit, rec.submitted_at_ns);
        last_notarized = std::max(last_notarized, rec.notarized_at_ns);
        latencies.push_back(double(rec.notarized_at_ns - rec.submitted_at_ns) / 1e9);
    }
    if (latencies.empty()) return stats;

    const double span_s = double(last_notarized - first_submit) / 1e9;
    stats.throughput_tps = span_s > 0 ? double(latencies.size()) / span_s : 0.0;
    stats.latency_mean_s =
        std::accumulate(latencies.begin(), latencies.end(), 0.0) / double(latencies.size());
    std::ranges::sort(latencies);
    stats.latency_median_s = latencies[latencies.size() / 2];
    const std::size_t p95 = std::min(latencies.size() - 1,
                                     static_cast<std::size_t>(0.95 * double(latencies.size())));
    stats.latency_p95_s = latencies[p95];
    return stats;
}

namespace {

std::mt19937_64 client_rng(std::uint64_t seed, int rep, int client) {
    std::seed_seq seq{seed, std::uint64_t(rep) + 1, std::uint64_t(client) + 1};
    return std::mt19937_64(seq);
}

struct RepOutcome {
    std::vector<TxRecord> issue;
    std::vector<TxRecord> pay;
};

RepOutcome run_repetition(const BenchConfig& cfg, const netsim::NetworkConfig& base, int rep) {
    netsim::NetworkConfig netcfg = base;
    netcfg.mode = netsim::SchedulerMode::Concurrent;
    netcfg.seed = cfg.seed + std::uint64_t(rep) * 0x9e3779b97f4a7c15ULL;
    netcfg.contracts.split_enabled = cfg.split_enabled;
    if (cfg.workers > 0) netcfg.default_workers = cfg.workers;

    auto net = netsim::Network::start(std::move(netcfg));
    (void)net->create_account(net->hmrc_node(), "VATPayments", AccountKind::GovPayments);
    (void)net->create_account(net->hmrc_node(), "VATInvestigator", AccountKind::GovInvestigator);
    NodeId legal_node, buyer_node, seller_node;
    for (const auto& node : net->config().nodes) {
        if (node.role == netsim::NodeRole::LegalCwp) legal_node = node.name;
        if (node.role == netsim::NodeRole::BuyerCwp) buyer_node = node.name;
        if (node.role == netsim::NodeRole::SellerCwp) seller_node = node.name;
    }
    (void)net->create_account(legal_node, "LegalAuthority", AccountKind::LegalAuthority);

    const int per_client = cfg.tx / cfg.cl;
    const auto& table = net->ledger().config().vat_table;

    struct ClientPlan {
        AccountRef seller;
        AccountRef buyer;
        netsim::ClientId issue_client;
        netsim::ClientId pay_client;
        std::vector<LineListPtr> baskets;
        std::vector<LinearId> invoices;
        std::vector<TxRecord> issue_records;
        std::vector<TxRecord> pay_records;
    };

    std::vector<ClientPlan> plans(static_cast<std::size_t>(cfg.cl));
    for (int i = 0; i < cfg.cl; ++i) {
        auto& plan = plans[static_cast<std::size_t>(i)];
        plan.seller = net->create_account(seller_node, "seller" + std::to_string(i),
                                          AccountKind::Seller);
        plan.buyer = net->create_account(buyer_node, "buyer" + std::to_string(i),
                                         AccountKind::Consumer);
        plan.issue_client = net->create_client(seller_node);
        plan.pay_client = net->create_client(buyer_node);

        auto rng = client_rng(cfg.seed, rep, i);
        Amount funding = 0;
        for (int j = 0; j < per_client; ++j) {
            plan.baskets.push_back(make_lines(gen_shopping_list(cfg.vol, rng, table)));
            funding += contracts::total_amount(plan.baskets.back()->items, table);
        }
        // pre-funded so no payment fails on funds
        net->deposit(plan.buyer, MoneyKind::Current, funding + 1);
    }

    auto issue_worker = [&](ClientPlan& plan) {
        std::vector<netsim::FlowHandle> handles;
        handles.reserve(plan.baskets.size());
        for (const auto& basket : plan.baskets) {
            flows::FlowRequest req;
            req.kind = flows::FlowKind::IssueInvoice;
            req.initiator = plan.seller.id;
            req.payload = flows::IssueInvoicePayload{plan.buyer.id, basket, MoneyKind::Current};
            handles.push_back(net->submit_flow(plan.issue_client, std::move(req)));
        }
        for (auto handle : handles) {
            auto result = net->wait(handle);
            plan.issue_records.push_back(
                {result.submitted_at_ns, result.notarized_at_ns, result.ok()});
            if (result.ok() && result.value().linear_id)
                plan.invoices.push_back(*result.value().linear_id);
        }
    };

    auto pay_worker = [&](ClientPlan& plan) {
        std::vector<netsim::FlowHandle> handles;
        handles.reserve(plan.invoices.size());
        for (auto id : plan.invoices) {
            flows::FlowRequest req;
            req.kind = flows::FlowKind::PayInvoice;
            req.initiator = plan.buyer.id;
            req.payload = flows::PayInvoicePayload{id};
            handles.push_back(net->submit_flow(plan.pay_client, std::move(req)));
        }
        for (auto handle : handles) {
            auto result = net->wait(handle);
            plan.pay_records.push_back(
                {result.submitted_at_ns, result.notarized_at_ns, result.ok()});
        }
    };

    {
        std::vector<std::jthread> threads;
        threads.reserve(plans.size());
        for (auto& plan : plans) threads.emplace_back(issue_worker, std::ref(plan));
    }
    if (cfg.phase != Phase::Issue) {
        std::vector<std::jthread> threads;
        threads.reserve(plans.size());
        for (auto& plan : plans) threads.emplace_back(pay_worker, std::ref(plan));
    }

    RepOutcome outcome;
    for (auto& plan : plans) {
        if (plan.issue_records.size() != plan.baskets.size() ||
            (cfg.phase != Phase::Issue && plan.pay_records.size() != plan.invoices.size()))
            throw LedgerError(Errc::IncompleteRun, "client finished with unresolved flows");
        outcome.issue.insert(outcome.issue.end(), plan.issue_records.begin(),
                             plan.issue_records.end());
        outcome.pay.insert(outcome.pay.end(), plan.pay_records.begin(), plan.pay_records.end());
    }
    return outcome;
}

PhaseStats average_rows(const std::vector<PhaseStats>& rows, const std::string& phase,
                        bool skip_first) {
    PhaseStats agg;
    agg.phase = phase;
    agg.run = 0;
    int used = 0;
    for (const auto& row : rows) {
        if (row.phase != phase) continue;
        if (skip_first && row.run == 1) {
            agg.rejected += row.rejected;
            continue;
        }
        agg.throughput_tps += row.throughput_tps;
        agg.latency_mean_s += row.latency_mean_s;
        agg.latency_median_s += row.latency_median_s;
        agg.latency_p95_s += row.latency_p95_s;
        agg.rejected += row.rejected;
        ++used;
    }
    if (used > 0) {
        agg.throughput_tps /= used;
        agg.latency_mean_s /= used;
        agg.latency_median_s /= used;
        agg.latency_p95_s /= used;
    }
    return agg;
}

}  // namespace

MetricsReport run_scenario(const BenchConfig& config, const netsim::NetworkConfig& base) {
    config.validate();

    MetricsReport report;
    report.config = config;
    const bool skip_first = config.discard_first && config.repetitions > 1;

    for (int rep = 0; rep < config.repetitions; ++rep) {
        auto outcome = run_repetition(config, base, rep);
        if (config.phase != Phase::Pay) {
            auto stats = compute_metrics(outcome.issue);
            stats.phase = "issue";
            stats.run = rep + 1;
            report.rejected_count += stats.rejected;
            report.runs.push_back(stats);
        }
        if (config.phase != Phase::Issue) {
            auto stats = compute_metrics(outcome.pay);
            stats.phase = "pay";
            stats.run = rep + 1;
            report.rejected_count += stats.rejected;
            report.runs.push_back(stats);
        }
        report.raw.insert(report.raw.end(), outcome.issue.begin(), outcome.issue.end());
        report.raw.insert(report.raw.end(), outcome.pay.begin(), outcome.pay.end());
    }

    if (config.phase != Phase::Pay)
        report.aggregates.push_back(average_rows(report.runs, "issue", skip_first));
    if (config.phase != Phase::Issue)
        report.aggregates.push_back(average_rows(report.runs, "pay", skip_first));
    return report;
}

namespace {

void append_row(std::string& out, const BenchConfig& cfg, const PhaseStats& row,
                const char* run_label) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%d,%s,%.4f,%.6f,%.6f,%d\n", row.phase.c_str(),
                  cfg.split_enabled ? "on" : "off", cfg.tx, cfg.vol, cfg.cl, run_label,
                  row.throughput_tps, row.latency_mean_s, row.latency_p95_s, row.rejected);
    out += buf;
}

}  // namespace

std::string to_csv(const MetricsReport& report, bool with_header) {
    std::string out;
    if (with_header)
        out += "phase,split,tx,vol,cl,run,throughput_tps,latency_mean_s,latency_p95_s,rejected\n";
    for (const auto& row : report.runs)
        append_row(out, report.config, row, std::to_string(row.run).c_str());
    for (const auto& row : report.aggregates) append_row(out, report.config, row, "avg");
    return out;
}

void export_csv(const MetricsReport& report, const std::string& path) {
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(path, ec) ||
                       std::filesystem::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::app);
    if (!out) throw LedgerError(Errc::IoError, "cannot open for writing: " + path);
    out << to_csv(report, fresh);
    if (!out) throw LedgerError(Errc::IoError, "write failed: " + path);
}

}  // namespace ledgersim::bench
