// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Acceptance suite. Eleven criteria, one pass/fail line each, nonzero
// exit if any hard assertion fails. Soft targets (split ratio band, R^2)
// are reported in the detail text but only their hard component gates.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ledgersim/bench.hpp"
#include "ledgersim/feasibility.hpp"
#include "ledgersim/fixtures.hpp"
#include "ledgersim/netsim.hpp"
#include "ledgersim/shopping_list.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace ledgersim;

namespace {

int g_failures = 0;
int g_index = 0;

void report(bool passed, const std::string& name, const std::string& detail) {
    ++g_index;
    std::printf("[%2d/11] %s %s: %s\n", g_index, passed ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!passed) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Point {
    double issue_tps = 0, pay_tps = 0;
    double issue_lat = 0, pay_lat = 0;
    int rejected = 0;
};

Point run_point(int tx, int vol, int cl, bool split, int reps, std::uint64_t seed) {
    bench::BenchConfig cfg;
    cfg.tx = tx;
    cfg.vol = vol;
    cfg.cl = cl;
    cfg.split_enabled = split;
    cfg.phase = bench::Phase::Both;
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.workers = 2;
    auto base = netsim::NetworkConfig::standard(netsim::SchedulerMode::Concurrent, seed);
    auto reportd = bench::run_scenario(cfg, base);
    Point p;
    if (const auto* issue = reportd.aggregate("issue")) {
        p.issue_tps = issue->throughput_tps;
        p.issue_lat = issue->latency_mean_s;
    }
    if (const auto* pay = reportd.aggregate("pay")) {
        p.pay_tps = pay->throughput_tps;
        p.pay_lat = pay->latency_mean_s;
    }
    p.rejected = reportd.rejected_count;
    return p;
}

double spread(const std::vector<double>& v) {
    double lo = v[0], hi = v[0], sum = 0;
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
    }
    return (hi - lo) / (sum / double(v.size()));
}

double r_squared(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = double(n) * sxx - sx * sx;
    if (denom == 0) return 0;
    const double slope = (double(n) * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / double(n);
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    return ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

// ---------------------------------------------------------------------------

feasibility::Report criterion_feasibility() {
    auto t0 = std::chrono::steady_clock::now();
    auto feas = feasibility::run_feasibility({});
    const double elapsed = seconds_since(t0);
    int passed = 0;
    for (const auto& c : feas.checks) passed += c.passed ? 1 : 0;
    std::set<std::string> groups_failed;
    for (const auto& c : feas.checks)
        if (!c.passed) groups_failed.insert(c.test_id);
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d/%zu assertion rows true across AT1-AT13 in %.2f s (limit 30 s)%s%s", passed,
                  feas.checks.size(), elapsed, groups_failed.empty() ? "" : "; first failure: ",
                  groups_failed.empty() ? "" : feas.first_failure().c_str());
    report(feas.all_passed() && elapsed < 30.0, "feasibility suite", detail);
    return feas;
}

void criterion_error_messages(const feasibility::Report& feas) {
    const bool funds_ok = feas.insufficient_funds_error == "insufficient funds available";
    const bool goods_ok =
        feas.disallowed_goods_error ==
        "you cannot pay for invalid goods with money from your token account";
    report(funds_ok && goods_ok, "error-message fidelity",
           "observed \"" + feas.insufficient_funds_error + "\" / \"" +
               feas.disallowed_goods_error + "\"");
}

void criterion_zero_rejection() {
    bool ok = true;
    std::string detail;
    for (int cl : {10, 50, 100}) {
        bench::BenchConfig cfg;
        cfg.tx = 1000;
        cfg.vol = 10;
        cfg.cl = cl;
        cfg.repetitions = 10;
        cfg.seed = 100 + std::uint64_t(cl);
        cfg.workers = 2;
        auto base = netsim::NetworkConfig::standard(netsim::SchedulerMode::Concurrent, cfg.seed);
        auto rep = bench::run_scenario(cfg, base);
        // zero in each repetition: every per-run row must be clean
        for (const auto& row : rep.runs) ok = ok && row.rejected == 0;
        detail += "cl=" + std::to_string(cl) + ":" + std::to_string(rep.rejected_count) + " ";
    }
    report(ok, "zero rejection under load",
           "rejected per config over 10 repetitions x2 phases: " + detail);
}

// The volume/split grid is measured in paired rounds: every round runs
// one repetition of each grid point back to back, so all points in a
// round see the same machine conditions. Comparative claims (volume
// spread, split overhead, issue-vs-pay) are evaluated on per-round
// ratios; the shared-host speed mode cancels out of a ratio taken
// within one round, and medians over rounds drop the remaining
// mode-boundary outliers.
struct GridData {
    std::map<std::pair<int, bool>, std::vector<Point>> rounds;  // (vol, split) -> per round
    std::map<std::pair<int, bool>, Point> medians;              // display values
};

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

GridData criterion_volume_insensitivity() {
    constexpr int kRounds = 12;  // plus one warm-up round
    const std::vector<std::pair<int, bool>> points{{10, true},  {50, true},  {100, true},
                                                   {10, false}, {50, false}, {100, false}};
    GridData data;
    for (int round = 0; round <= kRounds; ++round) {
        for (const auto& key : points) {
            bench::BenchConfig cfg;
            cfg.tx = 1000;
            cfg.vol = key.first;
            cfg.cl = 10;
            cfg.split_enabled = key.second;
            cfg.phase = bench::Phase::Both;
            cfg.repetitions = 1;
            cfg.discard_first = false;
            cfg.seed = 200 + std::uint64_t(round) * 31 + std::uint64_t(key.first);
            cfg.workers = 2;
            auto base =
                netsim::NetworkConfig::standard(netsim::SchedulerMode::Concurrent, cfg.seed);
            auto rep = bench::run_scenario(cfg, base);
            if (round == 0) continue;  // warm-up round
            Point p;
            p.issue_tps = rep.aggregate("issue")->throughput_tps;
            p.issue_lat = rep.aggregate("issue")->latency_mean_s;
            p.pay_tps = rep.aggregate("pay")->throughput_tps;
            p.pay_lat = rep.aggregate("pay")->latency_mean_s;
            p.rejected = rep.rejected_count;
            data.rounds[key].push_back(p);
        }
    }
    for (auto& [key, samples] : data.rounds) {
        std::vector<double> it, il, pt, pl;
        Point p;
        for (const auto& s : samples) {
            it.push_back(s.issue_tps);
            il.push_back(s.issue_lat);
            pt.push_back(s.pay_tps);
            pl.push_back(s.pay_lat);
            p.rejected += s.rejected;
        }
        p.issue_tps = median_of(it);
        p.issue_lat = median_of(il);
        p.pay_tps = median_of(pt);
        p.pay_lat = median_of(pl);
        data.medians[key] = p;
    }
    for (const auto& [key, p] : data.medians)
        std::printf("        grid vol=%-3d split=%-3s  issue %7.1f tps %.4f s   pay %7.1f tps %.4f s\n",
                    key.first, key.second ? "on" : "off", p.issue_tps, p.issue_lat, p.pay_tps,
                    p.pay_lat);

    // per-round throughput relative to the vol=10 point of the same
    // round and family; spread over {1, rel(50), rel(100)}
    bool ok = true;
    std::string detail;
    for (bool split : {true, false}) {
        for (const char* phase : {"issue", "pay"}) {
            auto tps_of = [&](const Point& p) {
                return std::string(phase) == "issue" ? p.issue_tps : p.pay_tps;
            };
            const auto& base_rounds = data.rounds.at({10, split});
            std::vector<double> rel{1.0};
            for (int vol : {50, 100}) {
                const auto& vol_rounds = data.rounds.at({vol, split});
                std::vector<double> ratios;
                for (std::size_t r = 0; r < vol_rounds.size(); ++r)
                    ratios.push_back(tps_of(vol_rounds[r]) / tps_of(base_rounds[r]));
                rel.push_back(median_of(ratios));
            }
            const double sp = spread(rel);
            ok = ok && sp < 0.20;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%s-%s %.1f%% ", phase, split ? "split" : "plain",
                          sp * 100);
            detail += buf;
        }
    }
    report(ok, "data-volume insensitivity",
           "within-family throughput spread over vol {10,50,100}, paired per round: " + detail +
               "(bound 20%)");
    return data;
}

void criterion_split_overhead(const GridData& data) {
    bool direction = true;
    bool in_band = true;
    std::string detail;
    for (int vol : {10, 50, 100}) {
        const auto& on = data.rounds.at({vol, true});
        const auto& off = data.rounds.at({vol, false});
        std::vector<double> ri, rp;
        for (std::size_t r = 0; r < on.size(); ++r) {
            ri.push_back(off[r].issue_tps / on[r].issue_tps);
            rp.push_back(off[r].pay_tps / on[r].pay_tps);
        }
        const double med_i = median_of(ri);
        const double med_p = median_of(rp);
        direction = direction && med_i > 1.0 && med_p > 1.0;
        in_band = in_band && med_i >= 1.2 && med_i <= 3.0 && med_p >= 1.2 && med_p <= 3.0;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "vol=%d[%.2fx,%.2fx] ", vol, med_i, med_p);
        detail += buf;
    }
    detail += in_band ? "(all within the soft band 1.2..3.0)" : "(soft band 1.2..3.0 not fully met)";
    report(direction, "split-payment overhead",
           "plain/split throughput ratios issue,pay (paired medians): " + detail);
}

std::vector<std::pair<int, Point>> criterion_latency_scaling() {
    std::vector<std::pair<int, Point>> curve;
    for (int cl = 10; cl <= 100; cl += 10)
        curve.emplace_back(cl, run_point(100 * cl, 10, cl, true, 5, 300 + std::uint64_t(cl)));

    bool monotone = true;
    std::vector<double> xs, issue_lat, pay_lat;
    for (const auto& [cl, p] : curve) {
        xs.push_back(cl);
        issue_lat.push_back(p.issue_lat);
        pay_lat.push_back(p.pay_lat);
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
        monotone = monotone && issue_lat[i] >= issue_lat[i - 1];
        monotone = monotone && pay_lat[i] >= pay_lat[i - 1];
    }
    const double r2i = r_squared(xs, issue_lat);
    const double r2p = r_squared(xs, pay_lat);
    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "mean latency over cl 10..100 at 100 invoices/client: issue %.3f->%.3f s, pay "
                  "%.3f->%.3f s; linear fit R2 issue=%.3f pay=%.3f (soft target 0.9)",
                  issue_lat.front(), issue_lat.back(), pay_lat.front(), pay_lat.back(), r2i, r2p);
    report(monotone, "latency scaling", detail);
    return curve;
}

void criterion_issue_vs_pay(const GridData& data,
                            const std::vector<std::pair<int, Point>>& curve) {
    bool ok = true;
    int configs = 0;
    double worst_margin = 1e9;
    for (const auto& [key, samples] : data.rounds) {
        std::vector<double> ratios;
        for (const auto& p : samples) ratios.push_back(p.pay_lat / p.issue_lat);
        const double med = median_of(ratios);
        ok = ok && med > 1.0;
        worst_margin = std::min(worst_margin, med);
        ++configs;
    }
    for (const auto& [cl, p] : curve) {
        ok = ok && p.issue_lat < p.pay_lat;
        worst_margin = std::min(worst_margin, p.pay_lat / p.issue_lat);
        ++configs;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "mean issue latency < mean pay latency at all %d configs (worst pay/issue "
                  "ratio %.3f)",
                  configs, worst_margin);
    report(ok, "issue-vs-pay ordering", detail);
}

void criterion_double_spend() {
    int violations = 0;
    const auto table = contracts::VatRateTable::uk_default();

    auto race_once = [&](netsim::SchedulerMode mode, std::uint64_t seed) {
        auto net = netsim::Network::start(netsim::NetworkConfig::standard(mode, seed));
        auto alice = net->create_account("BuyerCWP", "Alice", AccountKind::Consumer);
        auto mega = net->create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
        (void)net->create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
        (void)net->create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
        net->deposit(alice, MoneyKind::Current, 10'000'000);
        auto issue = net->issue_invoice(mega, alice, fixtures::basket2(table),
                                        MoneyKind::Current);
        if (!issue.ok()) return false;
        const LinearId id = *issue.value().linear_id;

        auto client = net->create_client("BuyerCWP");
        flows::FlowRequest r1, r2;
        r1.kind = r2.kind = flows::FlowKind::PayInvoice;
        r1.initiator = r2.initiator = alice.id;
        r1.payload = r2.payload = flows::PayInvoicePayload{id};
        auto h1 = net->submit_flow(client, std::move(r1));
        auto h2 = net->submit_flow(client, std::move(r2));
        auto v1 = net->wait(h1);
        auto v2 = net->wait(h2);

        const int oks = int(v1.ok()) + int(v2.ok());
        if (oks != 1) return false;
        const auto& loser = v1.ok() ? v2.error() : v1.error();
        const bool acceptable =
            loser.code == Errc::DoubleSpend ||
            (loser.violation && *loser.violation == ViolationReason::AlreadyPaid);
        if (!acceptable) return false;
        return net->get_balance(alice, MoneyKind::Current) == 10'000'000 - 32473;
    };

    for (std::uint64_t seed = 0; seed < 900; ++seed)
        if (!race_once(netsim::SchedulerMode::Deterministic, seed)) ++violations;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        if (!race_once(netsim::SchedulerMode::Concurrent, seed)) ++violations;

    report(violations == 0, "double-spend safety",
           "1000 racing payment pairs (900 seeded interleavings + 100 threaded): " +
               std::to_string(violations) + " violations");
}

void criterion_conservation() {
    auto net = netsim::Network::start(
        netsim::NetworkConfig::standard(netsim::SchedulerMode::Deterministic, 4242));
    auto mega = net->create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
    auto gov = net->create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
    (void)net->create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
    const auto& table = net->ledger().config().vat_table;

    constexpr int kBuyers = 5;
    constexpr int kPayments = 5000;
    std::vector<AccountRef> buyers;
    for (int i = 0; i < kBuyers; ++i) {
        buyers.push_back(net->create_account("BuyerCWP", "buyer" + std::to_string(i),
                                             AccountKind::Consumer));
        net->deposit(buyers.back(), MoneyKind::Current, 800'000'000);
    }

    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> vol(1, 15);
    std::uniform_int_distribution<int> pick(0, kBuyers - 1);
    int paid = 0;
    while (paid < kPayments) {
        const auto& buyer = buyers[static_cast<std::size_t>(pick(rng))];
        auto lines = bench::gen_shopping_list(vol(rng), rng, table);
        auto issue = net->issue_invoice(mega, buyer, std::move(lines), MoneyKind::Current);
        if (!issue.ok()) break;
        auto pay = net->pay_invoice(buyer, *issue.value().linear_id);
        if (pay.ok()) ++paid;
    }

    // (a) every committed transaction's movements sum to zero
    bool per_tx_zero = true;
    for (const auto& core : net->ledger().committed_transactions()) {
        if (core->command != Command::PayInvoice) continue;
        Amount sum = 0;
        for (const auto& m : core->movements) sum += m.delta;
        per_tx_zero = per_tx_zero && sum == 0;
    }

    // (b) the tax balance equals the brute-force recomputation over the
    // paid invoices in the event log, via the independent oracle
    std::int64_t oracle_vat = 0;
    int oracle_paid = 0;
    for (const auto& rec : net->ledger().event_log()) {
        for (const auto& out : rec.outputs) {
            const auto* inv = std::get_if<InvoiceState>(out.get());
            if (!inv || inv->status != InvoiceStatus::Paid) continue;
            oracle_vat += oracle::vat(inv->lines->items);
            ++oracle_paid;
        }
    }
    const Amount gov_balance = net->get_balance(gov, MoneyKind::Current);

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "%d paid invoices; tax balance %lld == oracle %lld; all movement sums zero: %s",
                  oracle_paid, static_cast<long long>(gov_balance),
                  static_cast<long long>(oracle_vat), per_tx_zero ? "yes" : "no");
    report(paid == kPayments && per_tx_zero && gov_balance == oracle_vat &&
               oracle_paid == kPayments,
           "conservation oracle", detail);
}

void criterion_vat_oracle() {
    const auto table = contracts::VatRateTable::uk_default();
    auto b1 = fixtures::basket1(table);
    auto b2 = fixtures::basket2(table);
    bool ok = contracts::net_amount(b1) == 55592 && contracts::vat_amount(b1, table) == 2459 &&
              contracts::total_amount(b1, table) == 58051 &&
              contracts::net_amount(b2) == 32218 && contracts::vat_amount(b2, table) == 255 &&
              contracts::total_amount(b2, table) == 32473 && oracle::net(b1) == 55592 &&
              oracle::vat(b1) == 2459 && oracle::net(b2) == 32218 && oracle::vat(b2) == 255;

    std::mt19937_64 rng(0xacce97);
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        auto lines = test_support::random_lines(rng, table);
        if (contracts::net_amount(lines) != oracle::net(lines)) ++mismatches;
        if (contracts::vat_amount(lines, table) != oracle::vat(lines)) ++mismatches;
        if (contracts::total_amount(lines, table) != oracle::total(lines)) ++mismatches;
    }
    report(ok && mismatches == 0, "vat arithmetic oracle",
           "sample baskets match frozen values 55592/2459/58051 and 32218/255/32473; 10000 "
           "fuzzed lists, " +
               std::to_string(mismatches) + " oracle mismatches");
}

void criterion_determinism() {
    auto a = feasibility::run_feasibility({});
    auto b = feasibility::run_feasibility({});
    const bool feas_same = a.event_log == b.event_log && a.table() == b.table();

    auto workload = [](std::uint64_t seed) {
        auto net = netsim::Network::start(
            netsim::NetworkConfig::standard(netsim::SchedulerMode::Deterministic, seed));
        auto alice = net->create_account("BuyerCWP", "Alice", AccountKind::Consumer);
        auto mega = net->create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
        auto gov = net->create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
        auto inv = net->create_account("HMRCCWP", "VATInvestigator",
                                       AccountKind::GovInvestigator);
        (void)net->create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
        const auto& table = net->ledger().config().vat_table;
        net->deposit(alice, MoneyKind::Current, 5'000'000);
        (void)net->issue_tokens(gov, alice, 1'000'000);
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<int> vol(1, 8);
        for (int i = 0; i < 40; ++i) {
            auto kind = i % 3 == 0 ? MoneyKind::Token : MoneyKind::Current;
            auto issue = net->issue_invoice(mega, alice,
                                            bench::gen_shopping_list(vol(rng), rng, table), kind);
            if (!issue.ok()) continue;
            if (i % 2 == 0) {
                if (kind == MoneyKind::Token)
                    (void)net->pay_invoice_with_tokens(alice, *issue.value().linear_id);
                else
                    (void)net->pay_invoice(alice, *issue.value().linear_id);
            }
        }
        (void)net->request_warrant(inv, mega);
        return net->ledger().event_log_ndjson();
    };
    const bool workload_same = workload(31337) == workload(31337);

    report(feas_same && workload_same, "determinism",
           std::string("feasibility reruns byte-identical: ") + (feas_same ? "yes" : "no") +
               "; seeded workload logs byte-identical: " + (workload_same ? "yes" : "no"));
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    std::printf("ledgersim acceptance suite\n");

    auto feas = criterion_feasibility();
    criterion_error_messages(feas);
    criterion_zero_rejection();
    auto grid = criterion_volume_insensitivity();
    criterion_split_overhead(grid);
    auto curve = criterion_latency_scaling();
    criterion_issue_vs_pay(grid, curve);
    criterion_double_spend();
    criterion_conservation();
    criterion_vat_oracle();
    criterion_determinism();

    std::printf("ACCEPTANCE: %d/11 criteria passed in %.1f s\n", 11 - g_failures,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
