// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "ledgersim/netsim.hpp"

namespace ledgersim::bench {

enum class Phase : std::uint8_t { Issue, Pay, Both };

const char* to_string(Phase phase);

/// Scalability factors for one scenario. Bounds follow the experimental
/// design: 10..100 clients, 10..100 items per invoice, at most 10,000
/// invoices, spread evenly over the clients.
struct BenchConfig {
    int tx = 1000;   // total invoices per run
    int vol = 10;    // items per invoice
    int cl = 10;     // number of clients
    bool split_enabled = true;
    Phase phase = Phase::Both;
    int repetitions = 10;
    std::uint64_t seed = 0;
    /// First repetition is excluded from aggregates (cache warm-up).
    bool discard_first = true;
    int workers = 0;  // per-node worker threads; 0 = network default

    void validate() const;  // throws ConfigViolation naming the bound
};

struct TxRecord {
    std::int64_t submitted_at_ns = 0;
    std::int64_t notarized_at_ns = 0;
    bool ok = false;
};

struct PhaseStats {
    std::string phase;  // "issue" or "pay"
    int run = 0;        // 1-based repetition; 0 in aggregate rows
    double throughput_tps = 0;
    double latency_mean_s = 0;
    double latency_median_s = 0;
    double latency_p95_s = 0;
    int rejected = 0;
};

struct MetricsReport {
    BenchConfig config;
    std::vector<PhaseStats> runs;        // one row per (phase, repetition)
    std::vector<PhaseStats> aggregates;  // one row per phase
    int rejected_count = 0;
    std::vector<TxRecord> raw;  // per-transaction records, all runs

    const PhaseStats* aggregate(const std::string& phase) const;
};

/// vol invoice lines with classes drawn from the table, prices uniform
/// in 100..10000 minor units, quantity 1. Same seed, same list.
std::vector<ItemLine> gen_shopping_list(int vol, std::mt19937_64& rng,
                                        const contracts::VatRateTable& table);

/// Throughput and latency statistics over one phase-run of records.
/// Throughput divides successes by the span from first submission to
/// last notarisation.
PhaseStats compute_metrics(std::span<const TxRecord> records);

/// Runs the scenario `repetitions` times, each on a fresh concurrent
/// network built from `base`, and aggregates.
MetricsReport run_scenario(const BenchConfig& config, const netsim::NetworkConfig& base);

/// Appends rows (single header per file): phase,split,tx,vol,cl,run,
/// throughput_tps,latency_mean_s,latency_p95_s,rejected. Aggregate rows
/// carry run="avg".
void export_csv(const MetricsReport& report, const std::string& path);

std::string to_csv(const MetricsReport& report, bool with_header);

}  // namespace ledgersim::bench
