// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/feasibility.hpp"

#include <sstream>

#include "ledgersim/fixtures.hpp"
#include "ledgersim/netsim.hpp"

namespace ledgersim::feasibility {

namespace {

// frozen oracle values for the two sample baskets under the default
// seven-class table; a misconfigured deployment diverges from these
constexpr Amount kBasket1Net = 55592;
constexpr Amount kBasket1Vat = 2459;
constexpr Amount kBasket1Total = kBasket1Net + kBasket1Vat;  // 58051
constexpr Amount kBasket2Net = 32218;
constexpr Amount kBasket2Vat = 255;
constexpr Amount kBasket2Total = kBasket2Net + kBasket2Vat;  // 32473

struct BalanceTriple {
    Amount seller = 0;
    Amount buyer = 0;
    Amount gov = 0;
};

class Scenario {
public:
    explicit Scenario(const Options& options) {
        auto cfg = netsim::NetworkConfig::standard(netsim::SchedulerMode::Deterministic,
                                                   options.seed);
        cfg.contracts = options.contracts;
        net_ = netsim::Network::start(std::move(cfg));
        alice_ = net_->create_account("BuyerCWP", "Alice", AccountKind::Consumer);
        mega_ = net_->create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
        gov_ = net_->create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
        investigator_ =
            net_->create_account("HMRCCWP", "VATInvestigator", AccountKind::GovInvestigator);
        legal_ = net_->create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
    }

    Report run() {
        pay_with_sufficient_funds();
        pay_with_insufficient_funds();
        pay_allowed_goods_with_tokens();
        pay_disallowed_goods_with_tokens();
        smart_warrant();
        report_.event_log = net_->ledger().event_log_ndjson();
        return std::move(report_);
    }

private:
    void check(const std::string& id, const std::string& description, bool passed) {
        report_.checks.push_back({id, description, passed});
    }

    BalanceTriple balances(MoneyKind kind) const {
        return {net_->get_balance(mega_, kind), net_->get_balance(alice_, kind),
                net_->get_balance(gov_, kind)};
    }

    std::optional<InvoiceStatus> vault_status(const AccountRef& account, LinearId invoice) const {
        auto found = net_->ledger().vault_find_by_linear(account.id, invoice);
        if (!found) return std::nullopt;
        const auto* inv = std::get_if<InvoiceState>(found->second.get());
        if (!inv) return std::nullopt;
        return inv->status;
    }

    bool stored(const AccountRef& account, LinearId invoice) const {
        return vault_status(account, invoice).has_value();
    }

    bool is_paid(const AccountRef& account, LinearId invoice) const {
        return vault_status(account, invoice) == InvoiceStatus::Paid;
    }

    // Scenario 1: issue and pay with sufficient funds (AT1-AT3)
    void pay_with_sufficient_funds() {
        const auto& table = net_->ledger().config().vat_table;
        net_->deposit(alice_, MoneyKind::Current, kBasket1Total);
        const auto before = balances(MoneyKind::Current);

        auto issue = net_->issue_invoice(mega_, alice_, fixtures::basket1(table),
                                         MoneyKind::Current);
        const LinearId inv = issue.ok() ? *issue.value().linear_id : 0;

        check("AT1", "Unpaid invoice is stored in MegaCompany ledger",
              issue.ok() && vault_status(mega_, inv) == InvoiceStatus::Unpaid);
        check("AT1", "Unpaid invoice is stored in Alice's ledger",
              issue.ok() && vault_status(alice_, inv) == InvoiceStatus::Unpaid);
        check("AT1", "Unpaid invoice is not stored in VATPayment's ledger",
              issue.ok() && !stored(gov_, inv));

        (void)net_->pay_invoice(alice_, inv);

        check("AT2", "Invoice state in MegaCompany's ledger is Paid", is_paid(mega_, inv));
        check("AT2", "Invoice state in Alice's ledger is Paid", is_paid(alice_, inv));
        check("AT2", "Invoice state in VATPayment's ledger is Paid", is_paid(gov_, inv));

        const auto after = balances(MoneyKind::Current);
        check("AT3", "MegaCompany's account balance is credited with Netamount",
              after.seller == before.seller + kBasket1Net);
        check("AT3", "Alice's account balance is debited with Totalamount",
              after.buyer == before.buyer - kBasket1Total);
        check("AT3", "VATPayment's account balance is credited with VAT",
              after.gov == before.gov + kBasket1Vat);
    }

    // Scenario 2: pay with insufficient funds (AT4-AT5)
    void pay_with_insufficient_funds() {
        const auto& table = net_->ledger().config().vat_table;
        const auto before = balances(MoneyKind::Current);

        auto issue = net_->issue_invoice(mega_, alice_, fixtures::basket1(table),
                                         MoneyKind::Current);
        const LinearId inv = issue.ok() ? *issue.value().linear_id : 0;
        auto pay = net_->pay_invoice(alice_, inv);
        if (!pay.ok()) report_.insufficient_funds_error = pay.error().message;

        check("AT4", "Invoice state in MegaCompany's ledger is not Paid",
              issue.ok() && !is_paid(mega_, inv));
        check("AT4", "Invoice state in Alice's ledger is not Paid",
              issue.ok() && !is_paid(alice_, inv));
        check("AT4", "Invoice state in VATPayment's ledger is not Paid", !is_paid(gov_, inv));

        const auto after = balances(MoneyKind::Current);
        check("AT5", "MegaCompany's account balance remains unchanged",
              after.seller == before.seller);
        check("AT5", "Alice's account balance remains unchanged", after.buyer == before.buyer);
        check("AT5", "VATPayment's account balance remains unchanged", after.gov == before.gov);
    }

    // Scenario 3: pay allowed goods with tokens (AT6-AT7)
    void pay_allowed_goods_with_tokens() {
        const auto& table = net_->ledger().config().vat_table;
        (void)net_->issue_tokens(gov_, alice_, 100000);
        const auto before = balances(MoneyKind::Token);

        auto issue = net_->issue_invoice(mega_, alice_, fixtures::basket2(table),
                                         MoneyKind::Token);
        const LinearId inv = issue.ok() ? *issue.value().linear_id : 0;
        (void)net_->pay_invoice_with_tokens(alice_, inv);

        check("AT6", "Invoice state in MegaCompany's ledger is Paid", is_paid(mega_, inv));
        check("AT6", "Invoice state in Alice's ledger is Paid", is_paid(alice_, inv));
        check("AT6", "Invoice state in VATPayment's ledger is Paid", is_paid(gov_, inv));

        const auto after = balances(MoneyKind::Token);
        check("AT7", "MegaCompany's account balance is credited with Netamount",
              after.seller == before.seller + kBasket2Net);
        check("AT7", "Alice's account balance is debited with Totalamount",
              after.buyer == before.buyer - kBasket2Total);
        check("AT7", "VATPayment's account balance is credited with VAT",
              after.gov == before.gov + kBasket2Vat);
    }

    // Scenario 4: pay disallowed goods with tokens (AT8-AT9)
    void pay_disallowed_goods_with_tokens() {
        const auto& table = net_->ledger().config().vat_table;
        const auto before = balances(MoneyKind::Token);

        auto issue = net_->issue_invoice(mega_, alice_, fixtures::basket1(table),
                                         MoneyKind::Token);
        const LinearId inv = issue.ok() ? *issue.value().linear_id : 0;
        auto pay = net_->pay_invoice_with_tokens(alice_, inv);
        if (!pay.ok()) report_.disallowed_goods_error = pay.error().message;

        check("AT8", "Invoice state in MegaCompany's ledger is not Paid",
              issue.ok() && !is_paid(mega_, inv));
        check("AT8", "Invoice state in Alice's ledger is not Paid",
              issue.ok() && !is_paid(alice_, inv));
        check("AT8", "Invoice state in VATPayment's ledger is not Paid", !is_paid(gov_, inv));

        const auto after = balances(MoneyKind::Token);
        check("AT9", "MegaCompany's account balance remains unchanged",
              after.seller == before.seller);
        check("AT9", "Alice's account balance remains unchanged", after.buyer == before.buyer);
        check("AT9", "VATPayment's account balance remains unchanged", after.gov == before.gov);
    }

    // Scenario 5: smart warrant (AT10-AT13)
    void smart_warrant() {
        auto request = net_->request_warrant(investigator_, mega_);
        const LinearId warrant = request.ok() ? *request.value().linear_id : 0;

        auto warrant_status = [&]() -> std::optional<DarStatus> {
            auto found = net_->ledger().vault_find_by_linear(investigator_.id, warrant);
            if (!found) return std::nullopt;
            const auto* dar = std::get_if<DataAccessRequestState>(found->second.get());
            if (!dar) return std::nullopt;
            return dar->status;
        };

        check("AT10", "Signed DAR is created and unexecuted",
              request.ok() && warrant_status() == DarStatus::Authorized);

        auto exec = net_->execute_warrant(investigator_, warrant);
        check("AT11", "Signed DAR is executed",
              exec.ok() && warrant_status() == DarStatus::Executed);

        VaultFilter invoices;
        invoices.kind = StateKind::Invoice;
        auto direct = net_->vault_query(mega_, invoices);
        bool same = exec.ok() && exec.value().data.size() == direct.size() && !direct.empty();
        if (same)
            for (std::size_t i = 0; i < direct.size(); ++i)
                same = same && states_equal(*exec.value().data[i], *direct[i]);
        check("AT12", "Fetched data is MegaCompany's actual transactions", same);

        auto again = net_->execute_warrant(investigator_, warrant);
        check("AT13", "VATInvestigator can only query MegaCompany's transactions once",
              exec.ok() && !again.ok() && again.error().code == Errc::AlreadyExecuted);
    }

    std::unique_ptr<netsim::Network> net_;
    AccountRef alice_, mega_, gov_, investigator_, legal_;
    Report report_;
};

}  // namespace

bool Report::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

std::string Report::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return c.test_id + ": " + c.description;
    return {};
}

std::string Report::table() const {
    std::ostringstream out;
    out << "Test ID  Description                                                  Result\n";
    out << "-------  -----------------------------------------------------------  ------\n";
    std::string last_id;
    for (const auto& c : checks) {
        std::string id = c.test_id == last_id ? "" : c.test_id;
        last_id = c.test_id;
        std::string desc = c.description;
        if (desc.size() < 61) desc.resize(61, ' ');
        out << id << std::string(id.size() < 9 ? 9 - id.size() : 1, ' ') << desc << "  "
            << (c.passed ? "True" : "False") << '\n';
    }
    return out.str();
}

Report run_feasibility(const Options& options) {
    Scenario scenario(options);
    return scenario.run();
}

}  // namespace ledgersim::feasibility
