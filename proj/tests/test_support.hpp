// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Hand-rolled transaction builders for contract tests. These mirror what
// a correct flow would assemble, without going through the flow engine,
// so the verifier is exercised against an independent construction.

#pragma once

#include <random>
#include <vector>

#include "ledgersim/contracts.hpp"
#include "ledgersim/transaction.hpp"

namespace test_support {

using namespace ledgersim;

inline std::vector<StatePtr> one(const StatePtr& s) { return {s}; }

struct Parties {
    AccountRef alice{1, "Alice", "BuyerCWP", AccountKind::Consumer};
    AccountRef mega{2, "MegaCompany", "SellerCWP", AccountKind::Seller};
    AccountRef gov{3, "VATPayments", "HMRCCWP", AccountKind::GovPayments};
    AccountRef investigator{4, "VATInvestigator", "HMRCCWP", AccountKind::GovInvestigator};
    AccountRef legal{5, "LegalAuthority", "LegalCWP", AccountKind::LegalAuthority};
};

inline StatePtr make_invoice_state(const Parties& p, std::vector<ItemLine> lines,
                                   MoneyKind kind, InvoiceStatus status,
                                   const contracts::ContractConfig& cfg,
                                   LinearId invoice_id = 100) {
    InvoiceState inv;
    inv.invoice_id = invoice_id;
    inv.seller = p.mega;
    inv.buyer = p.alice;
    inv.lines = make_lines(std::move(lines));
    inv.money_kind = kind;
    inv.net_amount = contracts::net_amount(inv.lines->items);
    inv.vat_amount = contracts::vat_amount(inv.lines->items, cfg.vat_table);
    inv.total_amount = inv.net_amount + inv.vat_amount;
    inv.status = status;
    if (status == InvoiceStatus::Unpaid || !cfg.split_enabled)
        inv.participants = {p.mega, p.alice};
    else
        inv.participants = {p.mega, p.alice, p.gov};
    return std::make_shared<const LedgerState>(std::move(inv));
}

inline TxCorePtr make_issue_tx(const Parties& p, std::vector<ItemLine> lines, MoneyKind kind,
                               const contracts::ContractConfig& cfg, LinearId invoice_id = 100) {
    auto out = make_invoice_state(p, std::move(lines), kind, InvoiceStatus::Unpaid, cfg, invoice_id);
    auto signers = contracts::required_signers_for(Command::IssueInvoice, one(out), cfg, p.gov);
    return make_tx_core({}, {out}, Command::IssueInvoice, std::move(signers), {});
}

// Builds the pay transaction consuming `unpaid_ref` whose resolved state
// is `unpaid`. Command picked from the invoice money kind.
inline TxCorePtr make_pay_tx(const Parties& p, const StateRef& unpaid_ref, const StatePtr& unpaid,
                             const contracts::ContractConfig& cfg) {
    const auto& inv = std::get<InvoiceState>(*unpaid);
    auto paid = make_invoice_state(p, inv.lines->items, inv.money_kind, InvoiceStatus::Paid, cfg,
                                   inv.invoice_id);
    Command cmd = inv.money_kind == MoneyKind::Token ? Command::PayInvoiceTokens
                                                     : Command::PayInvoice;
    auto signers = contracts::required_signers_for(cmd, one(paid), cfg, p.gov);
    auto moves = contracts::movements_for(cmd, one(paid), cfg, p.gov);
    return make_tx_core({unpaid_ref}, {paid}, cmd, std::move(signers), std::move(moves));
}

inline StateRef fake_ref(std::uint8_t tag, std::uint32_t index = 0) {
    StateRef ref;
    ref.tx_id.bytes.fill(tag);
    ref.output_index = index;
    return ref;
}

// Deterministic random invoice lines for fuzz tests: classes drawn from
// the table, quantity 1..4, price 0..10000.
inline std::vector<ItemLine> random_lines(std::mt19937_64& rng,
                                          const contracts::VatRateTable& table,
                                          std::size_t max_lines = 12) {
    std::vector<std::string> classes;
    for (const auto& [item, rate] : table.rates()) classes.push_back(item);
    std::uniform_int_distribution<std::size_t> n_lines(0, max_lines);
    std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
    std::uniform_int_distribution<Amount> price(0, 10000);
    std::uniform_int_distribution<std::int64_t> qty(1, 4);
    std::vector<ItemLine> lines;
    const std::size_t n = n_lines(rng);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& item = classes[pick(rng)];
        lines.push_back({item, price(rng), qty(rng), table.rate_for(item)});
    }
    return lines;
}

}  // namespace test_support
