// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Python bindings for the main operations: invoice arithmetic, shopping
// list ingestion, the assertion suite, benchmark scenarios and a small
// network facade for driving flows from Python.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ledgersim/bench.hpp"
#include "ledgersim/feasibility.hpp"
#include "ledgersim/fixtures.hpp"
#include "ledgersim/netsim.hpp"
#include "ledgersim/shopping_list.hpp"

namespace py = pybind11;
using namespace ledgersim;

namespace {

LineList lines_from_python(const py::iterable& items) {
    LineList lines;
    for (const auto& entry : items) {
        auto d = entry.cast<py::dict>();
        ItemLine line;
        line.item = d["item"].cast<std::string>();
        line.price = d["price"].cast<Amount>();
        line.quantity = d.contains("quantity") ? d["quantity"].cast<std::int64_t>() : 1;
        line.vat_rate = d["vat_rate"].cast<int>();
        lines.push_back(std::move(line));
    }
    return lines;
}

py::dict line_to_python(const ItemLine& line) {
    py::dict d;
    d["item"] = line.item;
    d["price"] = line.price;
    d["quantity"] = line.quantity;
    d["vat_rate"] = line.vat_rate;
    return d;
}

py::dict result_to_python(const flows::FlowResult& result) {
    py::dict d;
    d["ok"] = result.ok();
    if (result.ok()) {
        d["tx_id"] = result.value().tx_id.hex();
        if (result.value().linear_id) d["linear_id"] = *result.value().linear_id;
        d["fetched_states"] = result.value().data.size();
    } else {
        d["error"] = to_string(result.error().code);
        d["message"] = result.error().message;
    }
    d["latency_s"] = double(result.notarized_at_ns - result.submitted_at_ns) / 1e9;
    return d;
}

// Small deterministic-network facade mirroring the assertion scenarios.
class PyNetwork {
public:
    explicit PyNetwork(std::uint64_t seed) {
        net_ = netsim::Network::start(
            netsim::NetworkConfig::standard(netsim::SchedulerMode::Deterministic, seed));
    }

    std::uint64_t create_account(const std::string& node, const std::string& name,
                                 const std::string& kind) {
        AccountKind k;
        if (kind == "consumer") k = AccountKind::Consumer;
        else if (kind == "seller") k = AccountKind::Seller;
        else if (kind == "gov_payments") k = AccountKind::GovPayments;
        else if (kind == "gov_investigator") k = AccountKind::GovInvestigator;
        else if (kind == "legal_authority") k = AccountKind::LegalAuthority;
        else throw LedgerError(Errc::ConfigViolation, "unknown account kind: " + kind);
        auto ref = net_->create_account(node, name, k);
        refs_[ref.id] = ref;
        return ref.id;
    }

    void deposit(std::uint64_t account, const std::string& kind, Amount amount) {
        net_->deposit(ref(account), money_kind(kind), amount);
    }

    Amount balance(std::uint64_t account, const std::string& kind) {
        return net_->get_balance(ref(account), money_kind(kind));
    }

    py::dict issue_invoice(std::uint64_t seller, std::uint64_t buyer, const py::iterable& lines,
                           const std::string& kind) {
        return result_to_python(net_->issue_invoice(ref(seller), ref(buyer),
                                                    lines_from_python(lines), money_kind(kind)));
    }

    py::dict pay_invoice(std::uint64_t buyer, LinearId invoice_id) {
        return result_to_python(net_->pay_invoice(ref(buyer), invoice_id));
    }

    py::dict pay_invoice_with_tokens(std::uint64_t buyer, LinearId invoice_id) {
        return result_to_python(net_->pay_invoice_with_tokens(ref(buyer), invoice_id));
    }

    py::dict issue_tokens(std::uint64_t initiator, std::uint64_t recipient, Amount amount) {
        return result_to_python(net_->issue_tokens(ref(initiator), ref(recipient), amount));
    }

    py::dict request_warrant(std::uint64_t requester, std::uint64_t subject) {
        return result_to_python(net_->request_warrant(ref(requester), ref(subject)));
    }

    py::dict execute_warrant(std::uint64_t requester, LinearId warrant_id) {
        return result_to_python(net_->execute_warrant(ref(requester), warrant_id));
    }

    std::size_t vault_size(std::uint64_t account) {
        return net_->vault_query(ref(account), VaultFilter{}).size();
    }

    std::string event_log() { return net_->ledger().event_log_ndjson(); }

private:
    static MoneyKind money_kind(const std::string& kind) {
        if (kind == "current") return MoneyKind::Current;
        if (kind == "token") return MoneyKind::Token;
        throw LedgerError(Errc::ConfigViolation, "unknown money kind: " + kind);
    }

    const AccountRef& ref(std::uint64_t id) {
        auto it = refs_.find(id);
        if (it == refs_.end()) throw LedgerError(Errc::UnknownAccount, "unknown account id");
        return it->second;
    }

    std::unique_ptr<netsim::Network> net_;
    std::map<std::uint64_t, AccountRef> refs_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "permissioned-ledger payments simulator with VAT split payments";

    py::register_exception<LedgerError>(m, "LedgerError");

    m.def(
        "net_amount",
        [](const py::iterable& lines) { return contracts::net_amount(lines_from_python(lines)); },
        py::arg("lines"), "Sum of price*quantity over the lines, in minor units.");
    m.def(
        "vat_amount",
        [](const py::iterable& lines) {
            return contracts::vat_amount(lines_from_python(lines),
                                         contracts::VatRateTable::uk_default());
        },
        py::arg("lines"), "Per-line half-up-rounded VAT under the default rate table.");
    m.def(
        "total_amount",
        [](const py::iterable& lines) {
            return contracts::total_amount(lines_from_python(lines),
                                           contracts::VatRateTable::uk_default());
        },
        py::arg("lines"));

    m.def("default_vat_rates", [] {
        const auto table = contracts::VatRateTable::uk_default();
        py::dict d;
        for (const auto& [item, rate] : table.rates()) d[py::str(item)] = rate;
        return d;
    });
    m.def("default_allowed_goods", [] {
        const auto allowed = contracts::AllowedGoodsList::uk_default();
        py::list out;
        for (const auto& item : allowed.items()) out.append(item);
        return out;
    });
    m.def("sample_basket", [](int which) {
        auto table = contracts::VatRateTable::uk_default();
        auto lines = which == 1 ? fixtures::basket1(table) : fixtures::basket2(table);
        py::list out;
        for (const auto& line : lines) out.append(line_to_python(line));
        return out;
    }, py::arg("which") = 1);

    m.def(
        "parse_shopping_list",
        [](const std::string& path, bool strict) {
            ParseOptions options;
            options.strict = strict;
            std::vector<std::string> warnings;
            auto docs = parse_shopping_list_file(path, contracts::VatRateTable::uk_default(),
                                                 options, &warnings);
            py::list out;
            for (const auto& doc : docs) {
                py::dict d;
                d["buyer"] = doc.buyer;
                d["seller"] = doc.seller;
                d["declared_amount"] = doc.declared_amount;
                py::list lines;
                for (const auto& line : doc.lines) lines.append(line_to_python(line));
                d["lines"] = lines;
                out.append(d);
            }
            py::dict wrapped;
            wrapped["documents"] = out;
            wrapped["warnings"] = warnings;
            return wrapped;
        },
        py::arg("path"), py::arg("strict") = false);

    m.def(
        "run_feasibility",
        [](std::uint64_t seed) {
            feasibility::Options options;
            options.seed = seed;
            auto report = feasibility::run_feasibility(options);
            py::list checks;
            for (const auto& check : report.checks) {
                py::dict d;
                d["test_id"] = check.test_id;
                d["description"] = check.description;
                d["passed"] = check.passed;
                checks.append(d);
            }
            py::dict out;
            out["checks"] = checks;
            out["all_passed"] = report.all_passed();
            out["event_log"] = report.event_log;
            return out;
        },
        py::arg("seed") = 0, "Run the thirteen assertion scenarios on a deterministic network.");

    m.def(
        "run_bench",
        [](int tx, int vol, int cl, bool split, const std::string& phase, int reps,
           std::uint64_t seed, int workers) {
            bench::BenchConfig cfg;
            cfg.tx = tx;
            cfg.vol = vol;
            cfg.cl = cl;
            cfg.split_enabled = split;
            cfg.repetitions = reps;
            cfg.seed = seed;
            cfg.workers = workers;
            if (phase == "issue") cfg.phase = bench::Phase::Issue;
            else if (phase == "pay") cfg.phase = bench::Phase::Pay;
            else cfg.phase = bench::Phase::Both;
            auto report = bench::run_scenario(
                cfg, netsim::NetworkConfig::standard(netsim::SchedulerMode::Concurrent, seed));
            py::dict out;
            out["rejected_count"] = report.rejected_count;
            py::list aggregates;
            for (const auto& agg : report.aggregates) {
                py::dict row;
                row["phase"] = agg.phase;
                row["throughput_tps"] = agg.throughput_tps;
                row["latency_mean_s"] = agg.latency_mean_s;
                row["latency_p95_s"] = agg.latency_p95_s;
                row["rejected"] = agg.rejected;
                aggregates.append(row);
            }
            out["aggregates"] = aggregates;
            out["csv"] = bench::to_csv(report, true);
            return out;
        },
        py::arg("tx") = 100, py::arg("vol") = 10, py::arg("cl") = 10, py::arg("split") = true,
        py::arg("phase") = "both", py::arg("reps") = 2, py::arg("seed") = 0,
        py::arg("workers") = 0, "Run one benchmark scenario on a fresh concurrent network.");

    py::class_<PyNetwork>(m, "Network",
                          "Deterministic five-node network with the standard topology.")
        .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
        .def("create_account", &PyNetwork::create_account, py::arg("node"), py::arg("name"),
             py::arg("kind"))
        .def("deposit", &PyNetwork::deposit, py::arg("account"), py::arg("kind"),
             py::arg("amount"))
        .def("balance", &PyNetwork::balance, py::arg("account"), py::arg("kind"))
        .def("issue_invoice", &PyNetwork::issue_invoice, py::arg("seller"), py::arg("buyer"),
             py::arg("lines"), py::arg("kind") = "current")
        .def("pay_invoice", &PyNetwork::pay_invoice, py::arg("buyer"), py::arg("invoice_id"))
        .def("pay_invoice_with_tokens", &PyNetwork::pay_invoice_with_tokens, py::arg("buyer"),
             py::arg("invoice_id"))
        .def("issue_tokens", &PyNetwork::issue_tokens, py::arg("initiator"), py::arg("recipient"),
             py::arg("amount"))
        .def("request_warrant", &PyNetwork::request_warrant, py::arg("requester"),
             py::arg("subject"))
        .def("execute_warrant", &PyNetwork::execute_warrant, py::arg("requester"),
             py::arg("warrant_id"))
        .def("vault_size", &PyNetwork::vault_size, py::arg("account"))
        .def("event_log", &PyNetwork::event_log);
}
