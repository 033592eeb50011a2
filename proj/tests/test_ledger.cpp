// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <random>

#include "ledgersim/fixtures.hpp"
#include "ledgersim/ledger.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace ledgersim;

namespace {

const std::vector<NodeId> kNodes{"HMRCCWP", "BuyerCWP", "SellerCWP", "LegalCWP", "Notary"};

struct LedgerFixture {
    LedgerCore ledger{kNodes, "HMRCCWP", contracts::ContractConfig{}};
    test_support::Parties p;

    LedgerFixture() {
        p.alice = ledger.create_account("BuyerCWP", "Alice", AccountKind::Consumer);
        p.mega = ledger.create_account("SellerCWP", "MegaCompany", AccountKind::Seller);
        p.gov = ledger.create_account("HMRCCWP", "VATPayments", AccountKind::GovPayments);
        p.investigator =
            ledger.create_account("HMRCCWP", "VATInvestigator", AccountKind::GovInvestigator);
        p.legal = ledger.create_account("LegalCWP", "LegalAuthority", AccountKind::LegalAuthority);
    }

    void sign_all(SignedTransaction& tx) {
        for (const auto& signer : tx.core->required_signers)
            tx.add_signature(signer.id, default_signer().sign(signer.id, tx.core->tx_id));
    }

    // issue + fully sign + notarize; returns the committed unpaid ref
    std::pair<StateRef, StatePtr> commit_issue(std::vector<ItemLine> lines,
                                               MoneyKind kind = MoneyKind::Current) {
        auto out = test_support::make_invoice_state(p, std::move(lines), kind,
                                                    InvoiceStatus::Unpaid, ledger.config(),
                                                    ledger.next_linear_id());
        auto tx = ledger.build_and_sign(p.mega, {}, {out}, Command::IssueInvoice);
        sign_all(tx);
        auto result = ledger.notarize(tx);
        return {StateRef{result.tx_id, 0}, out};
    }

    SignedTransaction build_pay(const StateRef& ref, const StatePtr& unpaid) {
        const auto& inv = std::get<InvoiceState>(*unpaid);
        auto paid = test_support::make_invoice_state(p, inv.lines->items, inv.money_kind,
                                                     InvoiceStatus::Paid, ledger.config(),
                                                     inv.invoice_id);
        Command cmd = inv.money_kind == MoneyKind::Token ? Command::PayInvoiceTokens
                                                         : Command::PayInvoice;
        return ledger.build_and_sign(p.alice, {ref}, {paid}, cmd);
    }
};

}  // namespace

TEST_CASE("account creation and uniqueness") {
    LedgerFixture f;
    CHECK(f.p.alice.display_name == "Alice");
    CHECK_THROWS_AS((void)f.ledger.create_account("BuyerCWP", "Alice", AccountKind::Consumer),
                    LedgerError);
    CHECK_THROWS_AS((void)f.ledger.create_account("NoSuchCWP", "Bob", AccountKind::Consumer),
                    LedgerError);
    // second payments account on the HMRC node is rejected
    CHECK_THROWS_AS((void)f.ledger.create_account("HMRCCWP", "VAT2", AccountKind::GovPayments),
                    LedgerError);
    // government accounts live on the HMRC node only
    CHECK_THROWS_AS(
        (void)f.ledger.create_account("SellerCWP", "Rogue", AccountKind::GovInvestigator),
        LedgerError);
    try {
        (void)f.ledger.create_account("BuyerCWP", "Alice", AccountKind::Consumer);
    } catch (const LedgerError& e) {
        CHECK(e.code() == Errc::DuplicateAccountName);
    }
}

TEST_CASE("balances start at zero and track deposits") {
    LedgerFixture f;
    CHECK(f.ledger.get_balance(f.p.alice, MoneyKind::Current) == 0);
    CHECK(f.ledger.get_balance(f.p.alice, MoneyKind::Token) == 0);
    f.ledger.deposit(f.p.alice, MoneyKind::Token, 50000);
    CHECK(f.ledger.get_balance(f.p.alice, MoneyKind::Token) == 50000);
    CHECK(f.ledger.get_balance(f.p.alice, MoneyKind::Current) == 0);
    CHECK_THROWS_AS((void)f.ledger.get_balance(AccountId{999}, MoneyKind::Current), LedgerError);
    CHECK_THROWS_AS(f.ledger.deposit(f.p.alice, MoneyKind::Current, 0), LedgerError);
}

TEST_CASE("build_and_sign attaches the initiator signature and fixes the id") {
    LedgerFixture f;
    auto cfg = f.ledger.config();
    auto out = test_support::make_invoice_state(f.p, fixtures::basket1(cfg.vat_table),
                                                MoneyKind::Current, InvoiceStatus::Unpaid, cfg,
                                                f.ledger.next_linear_id());
    auto tx = f.ledger.build_and_sign(f.p.mega, {}, {out}, Command::IssueInvoice);
    CHECK(tx.signatures.size() == 1);
    CHECK(tx.signatures.contains(f.p.mega.id));
    CHECK_FALSE(tx.fully_signed());
    CHECK(tx.core->tx_id == compute_tx_id(*tx.core));

    SUBCASE("tampering any output changes the recomputed id") {
        TxCore tampered = *tx.core;
        auto inv = std::get<InvoiceState>(*tampered.outputs[0]);
        inv.total_amount += 1;
        tampered.outputs[0] = std::make_shared<const LedgerState>(inv);
        CHECK(compute_tx_id(tampered) != tx.core->tx_id);
        // the original signature no longer verifies against the new id
        CHECK_FALSE(default_signer().verify(f.p.mega.id, compute_tx_id(tampered),
                                            tx.signatures.at(f.p.mega.id)));
    }

    SUBCASE("unknown inputs are rejected at build time") {
        CHECK_THROWS_AS((void)f.ledger.build_and_sign(f.p.alice, {test_support::fake_ref(0x22)},
                                                      {out}, Command::PayInvoice),
                        LedgerError);
    }

    SUBCASE("initiator must be a required signer") {
        try {
            (void)f.ledger.build_and_sign(f.p.legal, {}, {out}, Command::IssueInvoice);
            FAIL("expected SignerNotParticipant");
        } catch (const LedgerError& e) {
            CHECK(e.code() == Errc::SignerNotParticipant);
        }
    }
}

TEST_CASE("notarize enforces signatures, uniqueness and funds") {
    LedgerFixture f;
    f.ledger.deposit(f.p.alice, MoneyKind::Current, 100000);
    auto [ref, unpaid] = f.commit_issue(fixtures::basket2(f.ledger.config().vat_table));

    SUBCASE("fully signed payment notarizes once") {
        auto pay = f.build_pay(ref, unpaid);
        f.sign_all(pay);
        auto result = f.ledger.notarize(pay);
        CHECK(result.timestamp > 0);
        CHECK(pay.notary_signature.has_value());
        CHECK(f.ledger.is_consumed(ref));

        // build_and_sign already refuses consumed inputs
        CHECK_THROWS_AS((void)f.build_pay(ref, unpaid), LedgerError);
    }

    SUBCASE("resubmitting the identical transaction is a double spend") {
        auto pay = f.build_pay(ref, unpaid);
        f.sign_all(pay);
        (void)f.ledger.notarize(pay);
        try {
            (void)f.ledger.notarize(pay);
            FAIL("expected DoubleSpend");
        } catch (const LedgerError& e) {
            CHECK(e.code() == Errc::DoubleSpend);
        }
    }

    SUBCASE("missing tax signature is rejected") {
        auto pay = f.build_pay(ref, unpaid);
        pay.add_signature(f.p.mega.id, default_signer().sign(f.p.mega.id, pay.core->tx_id));
        // gov signature deliberately absent
        try {
            (void)f.ledger.notarize(pay);
            FAIL("expected MissingSignature");
        } catch (const LedgerError& e) {
            CHECK(e.code() == Errc::MissingSignature);
        }
        CHECK_FALSE(f.ledger.is_consumed(ref));
    }

    SUBCASE("commit-time funds check is authoritative") {
        LedgerFixture g;
        g.ledger.deposit(g.p.alice, MoneyKind::Current, 100);  // far below the total
        auto [ref2, unpaid2] = g.commit_issue(fixtures::basket2(g.ledger.config().vat_table));
        auto pay = g.build_pay(ref2, unpaid2);
        g.sign_all(pay);
        try {
            (void)g.ledger.notarize(pay);
            FAIL("expected InsufficientFunds");
        } catch (const LedgerError& e) {
            CHECK(e.code() == Errc::InsufficientFunds);
            CHECK(std::string(e.what()) == "insufficient funds available");
        }
        // nothing committed: input unconsumed, balances untouched
        CHECK_FALSE(g.ledger.is_consumed(ref2));
        CHECK(g.ledger.get_balance(g.p.alice, MoneyKind::Current) == 100);
        CHECK(g.ledger.get_balance(g.p.mega, MoneyKind::Current) == 0);
    }
}

TEST_CASE("vault recording and isolation") {
    LedgerFixture f;
    f.ledger.deposit(f.p.alice, MoneyKind::Current, 100000);
    auto [ref, unpaid] = f.commit_issue(fixtures::basket1(f.ledger.config().vat_table));

    // unpaid invoice: participants are seller and buyer only
    f.ledger.record_state(f.p.mega, unpaid, ref.tx_id);
    f.ledger.record_state(f.p.alice, unpaid, ref.tx_id);
    CHECK_THROWS_AS(f.ledger.record_state(f.p.gov, unpaid, ref.tx_id), LedgerError);
    CHECK_THROWS_AS(f.ledger.record_state(f.p.legal, unpaid, ref.tx_id), LedgerError);

    VaultFilter unpaid_filter;
    unpaid_filter.kind = StateKind::Invoice;
    unpaid_filter.invoice_status = InvoiceStatus::Unpaid;
    CHECK(f.ledger.vault_query(f.p.alice, unpaid_filter).size() == 1);
    CHECK(f.ledger.vault_query(f.p.mega, unpaid_filter).size() == 1);
    CHECK(f.ledger.vault_query(f.p.gov, unpaid_filter).empty());
    CHECK(f.ledger.vault_query(f.p.legal, VaultFilter{}).empty());

    auto pay = f.build_pay(ref, unpaid);
    f.sign_all(pay);
    auto result = f.ledger.notarize(pay);
    auto paid = pay.core->outputs[0];
    f.ledger.record_state(f.p.mega, paid, result.tx_id);
    f.ledger.record_state(f.p.alice, paid, result.tx_id);
    f.ledger.record_state(f.p.gov, paid, result.tx_id);

    // the paid version supersedes the unpaid one in every vault
    CHECK(f.ledger.vault_query(f.p.alice, unpaid_filter).empty());
    VaultFilter paid_filter;
    paid_filter.invoice_status = InvoiceStatus::Paid;
    CHECK(f.ledger.vault_query(f.p.alice, paid_filter).size() == 1);
    CHECK(f.ledger.vault_query(f.p.mega, paid_filter).size() == 1);
    CHECK(f.ledger.vault_query(f.p.gov, paid_filter).size() == 1);

    // counterparty filter
    VaultFilter by_seller;
    by_seller.counterparty = f.p.mega.id;
    CHECK(f.ledger.vault_query(f.p.alice, by_seller).size() == 1);
    VaultFilter by_stranger;
    by_stranger.counterparty = f.p.legal.id;
    CHECK(f.ledger.vault_query(f.p.alice, by_stranger).empty());

    // vault isolation: every returned state lists the account
    for (const auto& account : {f.p.alice, f.p.mega, f.p.gov}) {
        for (const auto& state : f.ledger.vault_query(account, VaultFilter{})) {
            const auto& parts = participants_of(*state);
            CHECK(std::any_of(parts.begin(), parts.end(),
                              [&](const AccountRef& pr) { return pr.id == account.id; }));
        }
    }
}

TEST_CASE("conservation and lifecycle over a randomized workload") {
    LedgerFixture f;
    std::mt19937_64 rng(0xfeedbeef);
    f.ledger.deposit(f.p.alice, MoneyKind::Current, 10'000'000);

    const Amount alice0 = 10'000'000;
    Amount expected_gov = 0;
    std::vector<std::pair<StateRef, StatePtr>> open;
    int paid_count = 0;

    for (int i = 0; i < 120; ++i) {
        const bool do_issue = open.empty() || (rng() % 2 == 0);
        if (do_issue) {
            auto lines = test_support::random_lines(rng, f.ledger.config().vat_table);
            open.push_back(f.commit_issue(std::move(lines)));
        } else {
            auto [ref, unpaid] = open.back();
            open.pop_back();
            auto pay = f.build_pay(ref, unpaid);
            f.sign_all(pay);
            (void)f.ledger.notarize(pay);
            expected_gov += std::get<InvoiceState>(*unpaid).vat_amount;
            ++paid_count;

            // per-transaction conservation: movements sum to zero
            Amount sum = 0;
            for (const auto& m : pay.core->movements) sum += m.delta;
            CHECK(sum == 0);
        }
    }

    // total current money is unchanged by payments
    Amount total = 0;
    for (const auto& acct : {f.p.alice, f.p.mega, f.p.gov})
        total += f.ledger.get_balance(acct, MoneyKind::Current);
    CHECK(total == alice0);
    CHECK(f.ledger.get_balance(f.p.gov, MoneyKind::Current) == expected_gov);

    // uniqueness: no input consumed by two transactions
    std::map<StateRef, int> consumers;
    for (const auto& core : f.ledger.committed_transactions())
        for (const auto& in : core->inputs) consumers[in]++;
    for (const auto& [ref, count] : consumers) CHECK(count == 1);

    // linear lifecycle: per invoice id the sequence is [Unpaid] or [Unpaid, Paid]
    std::map<LinearId, std::vector<InvoiceStatus>> sequences;
    for (const auto& rec : f.ledger.event_log()) {
        for (const auto& out : rec.outputs)
            if (const auto* inv = std::get_if<InvoiceState>(out.get()))
                sequences[inv->invoice_id].push_back(inv->status);
    }
    for (auto& [id, seq] : sequences) {
        REQUIRE(!seq.empty());
        CHECK(seq.front() == InvoiceStatus::Unpaid);
        CHECK(seq.size() <= 2);
        if (seq.size() == 2) CHECK(seq.back() == InvoiceStatus::Paid);
    }
    CHECK(paid_count > 10);
}

TEST_CASE("event log replay reconstructs balances and vaults") {
    LedgerFixture f;
    f.ledger.deposit(f.p.alice, MoneyKind::Current, 1'000'000);
    f.ledger.deposit(f.p.alice, MoneyKind::Token, 200'000);

    auto record_all = [&](const SignedTransaction& tx) {
        for (const auto& out : tx.core->outputs)
            for (const auto& part : participants_of(*out))
                f.ledger.record_state(f.ledger.lookup_account(part.id), out, tx.core->tx_id);
    };

    std::mt19937_64 rng(7);
    for (int i = 0; i < 25; ++i) {
        auto lines = test_support::random_lines(rng, f.ledger.config().vat_table);
        auto [ref, unpaid] = f.commit_issue(std::move(lines));
        auto issue_core = f.ledger.committed_tx(ref.tx_id);
        for (const auto& out : issue_core->outputs)
            for (const auto& part : participants_of(*out))
                f.ledger.record_state(f.ledger.lookup_account(part.id), out, ref.tx_id);
        if (i % 2 == 0) {
            auto pay = f.build_pay(ref, unpaid);
            f.sign_all(pay);
            (void)f.ledger.notarize(pay);
            record_all(pay);
        }
    }

    auto live = f.ledger.snapshot();
    auto replayed = LedgerCore::replay(f.ledger.event_log());
    CHECK(live == replayed);

    // the exported byte stream is stable
    CHECK(f.ledger.event_log_ndjson() == f.ledger.event_log_ndjson());
}
