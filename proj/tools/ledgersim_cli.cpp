// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Operator entry point: the assertion suite, benchmark sweeps, shopping
// list ingestion and a narrated demo run.
//
// Exit codes: 0 success, 1 assertion or validation failure, 2
// configuration error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "ledgersim/bench.hpp"
#include "ledgersim/feasibility.hpp"
#include "ledgersim/fixtures.hpp"
#include "ledgersim/shopping_list.hpp"

using namespace ledgersim;

namespace {

constexpr const char* kConfigEnvVar = "LEDGERSIM_CONFIG";

netsim::NetworkConfig load_network_config(const std::string& config_path) {
    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    if (path.empty()) return netsim::NetworkConfig::standard();
    return netsim::NetworkConfig::from_json_file(path);
}

// "10,50,100", "10..100 step 10", "10..12" or a single value
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    auto parse_one = [](const std::string& s) {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    };
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const int from = parse_one(text.substr(0, dots));
        std::string rest = text.substr(dots + 2);
        int step = 1;
        if (auto at = rest.find("step"); at != std::string::npos) {
            step = parse_one(rest.substr(at + 4));
            rest = rest.substr(0, at);
        }
        while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back())))
            rest.pop_back();
        const int to = parse_one(rest);
        if (step <= 0) throw LedgerError(Errc::ConfigViolation, "step must be positive");
        for (int v = from; v <= to; v += step) values.push_back(v);
        return values;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto token = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!token.empty()) values.push_back(parse_one(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) throw LedgerError(Errc::ConfigViolation, "empty factor list: " + text);
    return values;
}

int cmd_feasibility(const std::string& config_path, std::uint64_t seed, bool quiet) {
    auto netcfg = load_network_config(config_path);
    feasibility::Options options;
    options.seed = seed;
    options.contracts = netcfg.contracts;
    auto report = feasibility::run_feasibility(options);

    if (!quiet) std::cout << report.table() << '\n';
    int passed = 0;
    for (const auto& check : report.checks) passed += check.passed ? 1 : 0;
    std::cout << passed << "/" << report.checks.size() << " assertions true\n";
    if (!report.all_passed()) {
        std::cout << "first failure: " << report.first_failure() << '\n';
        return 1;
    }
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& tx_list,
              const std::string& vol_list, const std::string& cl_list, const std::string& split,
              const std::string& phase_name, int reps, std::uint64_t seed,
              const std::string& out_path, int workers, bool keep_first) {
    auto base = load_network_config(config_path);

    bench::BenchConfig cfg;
    cfg.repetitions = reps;
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.discard_first = !keep_first;
    if (split == "on")
        cfg.split_enabled = true;
    else if (split == "off")
        cfg.split_enabled = false;
    else
        throw LedgerError(Errc::ConfigViolation, "--split must be on or off");
    if (phase_name == "issue")
        cfg.phase = bench::Phase::Issue;
    else if (phase_name == "pay")
        cfg.phase = bench::Phase::Pay;
    else if (phase_name == "both")
        cfg.phase = bench::Phase::Both;
    else
        throw LedgerError(Errc::ConfigViolation, "--phase must be issue, pay or both");

    for (int tx : parse_int_list(tx_list)) {
        for (int vol : parse_int_list(vol_list)) {
            for (int cl : parse_int_list(cl_list)) {
                cfg.tx = tx;
                cfg.vol = vol;
                cfg.cl = cl;
                cfg.validate();
                std::cout << "running tx=" << tx << " vol=" << vol << " cl=" << cl
                          << " split=" << split << " reps=" << reps << " ..." << std::endl;
                auto report = bench::run_scenario(cfg, base);
                for (const auto& agg : report.aggregates) {
                    std::printf("  %-5s  %8.2f tps  mean %7.4f s  p95 %7.4f s  rejected %d\n",
                                agg.phase.c_str(), agg.throughput_tps, agg.latency_mean_s,
                                agg.latency_p95_s, agg.rejected);
                }
                if (!out_path.empty()) bench::export_csv(report, out_path);
            }
        }
    }
    if (!out_path.empty()) std::cout << "results appended to " << out_path << '\n';
    return 0;
}

void print_balances(netsim::Network& net, const std::vector<AccountRef>& accounts,
                    MoneyKind kind) {
    std::cout << "    " << to_string(kind) << " balances:";
    for (const auto& a : accounts)
        std::cout << "  " << a.display_name << "=" << net.get_balance(a, kind);
    std::cout << '\n';
}

int cmd_demo(const std::string& config_path, std::uint64_t seed) {
    auto netcfg = load_network_config(config_path);
    netcfg.mode = netsim::SchedulerMode::Deterministic;
    netcfg.seed = seed;
    auto net = netsim::Network::start(netcfg);
    const auto& table = net->ledger().config().vat_table;

    auto alice = net->create_account("BuyerCWP", "Alice", AccountKind::Consumer);
    auto mega = net->create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
    auto gov = net->create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
    auto investigator =
        net->create_account("HMRCCWP", "VATInvestigator", AccountKind::GovInvestigator);
    (void)net->create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
    std::vector<AccountRef> parties{mega, alice, gov};

    auto basket1 = fixtures::basket1(table);
    auto basket2 = fixtures::basket2(table);
    const Amount total1 = contracts::total_amount(basket1, table);

    std::cout << "== ledgersim demo: split payments, tokens, smart warrants ==\n\n";
    std::cout << "[1] funding Alice with " << total1 << " and issuing basket 1 ("
              << basket1.size() << " lines, net " << contracts::net_amount(basket1) << ", VAT "
              << contracts::vat_amount(basket1, table) << ", total " << total1 << ")\n";
    net->deposit(alice, MoneyKind::Current, total1);
    auto issue1 = net->issue_invoice(mega, alice, basket1, MoneyKind::Current);
    std::cout << "    committed " << issue1.value().tx_id.hex().substr(0, 12)
              << ", unpaid invoice visible to MegaCompany and Alice only\n";

    std::cout << "[2] Alice pays invoice " << *issue1.value().linear_id
              << "; the buyer's debit splits into seller net and VAT\n";
    (void)net->pay_invoice(alice, *issue1.value().linear_id);
    print_balances(*net, parties, MoneyKind::Current);

    std::cout << "[3] issuing " << 100000 << " tokens to Alice and paying basket 2 ("
              << basket2.size() << " lines, allowed goods only) with tokens\n";
    (void)net->issue_tokens(gov, alice, 100000);
    auto issue2 = net->issue_invoice(mega, alice, basket2, MoneyKind::Token);
    (void)net->pay_invoice_with_tokens(alice, *issue2.value().linear_id);
    print_balances(*net, parties, MoneyKind::Token);

    std::cout << "[4] attempting to pay basket 1 (contains Alcohol) with tokens\n";
    auto issue3 = net->issue_invoice(mega, alice, basket1, MoneyKind::Token);
    auto blocked = net->pay_invoice_with_tokens(alice, *issue3.value().linear_id);
    std::cout << "    rejected: " << blocked.error().message << '\n';

    std::cout << "[5] VATInvestigator obtains a warrant for MegaCompany and executes it\n";
    auto warrant = net->request_warrant(investigator, mega);
    auto exec = net->execute_warrant(investigator, *warrant.value().linear_id);
    std::cout << "    fetched " << exec.value().data.size()
              << " invoice states from the seller's vault\n";
    auto again = net->execute_warrant(investigator, *warrant.value().linear_id);
    std::cout << "    second execution: " << again.error().message << '\n';

    std::cout << "\nevent log: " << net->ledger().event_log().size() << " records\n";
    return 0;
}

int cmd_ingest(const std::string& config_path, const std::string& path, bool strict) {
    auto netcfg = load_network_config(config_path);
    const auto& table = netcfg.contracts.vat_table;
    std::vector<std::string> warnings;
    ParseOptions options;
    options.strict = strict;
    auto docs = parse_shopping_list_file(path, table, options, &warnings);

    std::cout << path << ": " << docs.size() << " document(s)\n";
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& doc = docs[i];
        const Amount net_value = contracts::net_amount(doc.lines);
        const Amount vat = contracts::vat_amount(doc.lines, table);
        std::cout << "  [" << i << "] " << doc.seller << " -> " << doc.buyer << ", "
                  << doc.lines.size() << " lines, net " << net_value << ", VAT " << vat
                  << ", total " << net_value + vat << " (declared amount "
                  << doc.declared_amount << " ignored)\n";
    }
    for (const auto& warning : warnings) std::cout << "  warning: " << warning << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"permissioned-ledger payments simulator with VAT split payments"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "network/contract config JSON (default: $" + std::string(kConfigEnvVar) + ")");

    auto* feas = app.add_subcommand("feasibility", "run the thirteen assertion scenarios");
    std::uint64_t feas_seed = 0;
    bool feas_quiet = false;
    feas->add_option("--seed", feas_seed, "scheduler seed");
    feas->add_flag("--quiet", feas_quiet, "summary line only");

    auto* benchcmd = app.add_subcommand("bench", "scalability sweeps over tx, vol and clients");
    std::string tx_list = "1000", vol_list = "10", cl_list = "10";
    std::string split = "on", phase = "both", out_path = "bench_results.csv";
    int reps = 10, workers = 0;
    std::uint64_t bench_seed = 0;
    bool keep_first = false;
    benchcmd->add_option("--tx", tx_list, "invoices per run (list or a..b step s)");
    benchcmd->add_option("--vol", vol_list, "items per invoice (list or range)");
    benchcmd->add_option("--clients", cl_list, "client count (list or range)");
    benchcmd->add_option("--split", split, "split payments: on|off");
    benchcmd->add_option("--phase", phase, "issue|pay|both");
    benchcmd->add_option("--reps", reps, "repetitions per data point");
    benchcmd->add_option("--seed", bench_seed, "workload seed");
    benchcmd->add_option("--out", out_path, "CSV output path (appends)");
    benchcmd->add_option("--workers", workers, "worker threads per node");
    benchcmd->add_flag("--keep-first", keep_first, "include the first run in aggregates");

    auto* demo = app.add_subcommand("demo", "narrated end-to-end run of the sample baskets");
    std::uint64_t demo_seed = 0;
    demo->add_option("--seed", demo_seed, "scheduler seed");

    auto* ingest = app.add_subcommand("ingest", "parse and validate shopping-list JSON");
    std::string ingest_path;
    bool strict = false;
    ingest->add_option("path", ingest_path, "shopping-list JSON file")->required();
    ingest->add_flag("--strict", strict, "treat vat-rate mismatches as errors");

    CLI11_PARSE(app, argc, argv);

    try {
        if (feas->parsed()) return cmd_feasibility(config_path, feas_seed, feas_quiet);
        if (benchcmd->parsed())
            return cmd_bench(config_path, tx_list, vol_list, cl_list, split, phase, reps,
                             bench_seed, out_path, workers, keep_first);
        if (demo->parsed()) return cmd_demo(config_path, demo_seed);
        if (ingest->parsed()) return cmd_ingest(config_path, ingest_path, strict);
    } catch (const LedgerError& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        switch (e.code()) {
            case Errc::ConfigViolation:
            case Errc::ParseError:
            case Errc::IoError:
            case Errc::UnknownNode:
                return 2;
            default:
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
