// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Initiator-side protocol machines. Each flow builds a transaction,
// collects counterparty signatures over sessions, submits to the notary
// and distributes the committed states to participant nodes. A machine
// suspends after sending and resumes when its session delivers a reply.

#include "ledgersim/flows.hpp"

#include <set>

#include "ledgersim/netsim.hpp"

namespace ledgersim::flows {

const char* to_string(FlowKind kind) {
    switch (kind) {
        case FlowKind::IssueInvoice: return "IssueInvoice";
        case FlowKind::PayInvoice: return "PayInvoice";
        case FlowKind::PayInvoiceTokens: return "PayInvoiceTokens";
        case FlowKind::IssueTokens: return "IssueTokens";
        case FlowKind::RequestWarrant: return "RequestWarrant";
        case FlowKind::ExecuteWarrant: return "ExecuteWarrant";
    }
    return "?";
}

}  // namespace ledgersim::flows

namespace ledgersim::netsim {

namespace {

flows::FlowError from_violation(const Violation& v) {
    Errc code = Errc::ContractViolation;
    switch (v.reason) {
        case ViolationReason::UnauthorizedIssuer: code = Errc::UnauthorizedIssuer; break;
        case ViolationReason::NotRequester: code = Errc::NotRequester; break;
        case ViolationReason::AlreadyExecuted: code = Errc::AlreadyExecuted; break;
        case ViolationReason::UnknownWarrant: code = Errc::UnknownWarrant; break;
        case ViolationReason::NonPositiveAmount: code = Errc::NonPositiveAmount; break;
        default: break;
    }
    return {code, v.reason, v.detail};
}

flows::FlowError from_error(const LedgerError& e) {
    return {e.code(), std::nullopt, e.what()};
}

class ProtoFlow : public FlowMachine {
public:
    explicit ProtoFlow(flows::FlowRequest request) : request_(std::move(request)) {}

    void start(FlowContext& ctx) final {
        try {
            if (auto err = build(ctx)) {
                ctx.finish_failed(std::move(*err));
                return;
            }
        } catch (const LedgerError& e) {
            ctx.finish_failed(from_error(e));
            return;
        }
        begin_signing(ctx);
    }

    void on_message(FlowContext& ctx, SessionId session, const MsgBody& body) final {
        if (const auto* closed = std::get_if<SessionClosed>(&body)) {
            ctx.finish_failed({Errc::SessionFailure, std::nullopt, closed->reason});
            return;
        }
        if (const auto* refused = std::get_if<SignRefused>(&body)) {
            ctx.finish_failed(from_violation(refused->violation));
            return;
        }
        if (const auto* failed = std::get_if<NotarizeFailed>(&body)) {
            ctx.finish_failed({failed->code, std::nullopt, failed->message});
            return;
        }
        if (const auto* response = std::get_if<SignResponse>(&body)) {
            if (!pending_signs_.erase(session)) return;
            tx_.add_signature(response->signer, response->signature);
            if (pending_signs_.empty()) send_notarize(ctx);
            return;
        }
        if (const auto* committed = std::get_if<NotarizeOk>(&body)) {
            if (session != notary_session_) return;
            handle_committed(ctx, *committed);
            return;
        }
        if (std::holds_alternative<RecordAck>(body)) {
            pending_acks_.erase(session);
            maybe_finish(ctx);
            return;
        }
        if (const auto* data = std::get_if<WarrantDataResponse>(&body)) {
            if (session != data_session_) return;
            ok_.data = data->states;
            awaiting_data_ = false;
            maybe_finish(ctx);
            return;
        }
    }

protected:
    /// Validates the request and fills tx_ (signed by the initiator),
    /// resolved_inputs_ and the result extras. Returning an error or
    /// throwing LedgerError fails the flow with no effects.
    virtual std::optional<flows::FlowError> build(FlowContext& ctx) = 0;

    /// Node hosting extra data to fetch after commit (warrant execution).
    virtual std::optional<NodeId> data_fetch_node() const { return std::nullopt; }

    void begin_signing(FlowContext& ctx) {
        auto& ledger = ctx.ledger();
        if (auto violation = contracts::verify_transaction(*tx_.core, resolved_inputs_,
                                                           ledger.hmrc_node(), ctx.config())) {
            ctx.finish_failed(from_violation(*violation));
            return;
        }
        for (const auto& signer : tx_.core->required_signers) {
            if (tx_.signatures.contains(signer.id)) continue;
            if (signer.host_node == ctx.node_id()) {
                tx_.add_signature(signer.id, default_signer().sign(signer.id, tx_.core->tx_id));
            } else {
                const SessionId session = ctx.open_session(signer.host_node);
                pending_signs_.insert(session);
                ctx.send(session, SignRequest{tx_.core, signer.id});
            }
        }
        if (pending_signs_.empty()) send_notarize(ctx);
    }

    void send_notarize(FlowContext& ctx) {
        notary_session_ = ctx.open_session(ctx.notary_node());
        ctx.send(notary_session_, NotarizeRequest{tx_});
    }

    void handle_committed(FlowContext& ctx, const NotarizeOk& committed) {
        tx_.timestamp = committed.result.timestamp;
        tx_.notary_signature = committed.notary_signature;
        ctx.stamp_notarized();
        ok_.tx_id = tx_.core->tx_id;
        ok_.notary_timestamp = committed.result.timestamp;
        finalizing_ = true;

        auto& ledger = ctx.ledger();
        std::set<NodeId> targets;
        for (const auto& out : tx_.core->outputs)
            for (const auto& p : participants_of(*out)) targets.insert(p.host_node);
        for (const auto& node : targets) {
            if (node == ctx.node_id()) {
                for (const auto& out : tx_.core->outputs)
                    for (const auto& p : participants_of(*out))
                        if (p.host_node == node) ledger.record_state(p, out, tx_.core->tx_id);
            } else {
                const SessionId session = ctx.open_session(node);
                pending_acks_.insert(session);
                ctx.send(session, RecordRequest{tx_.core});
            }
        }

        if (auto fetch_node = data_fetch_node()) {
            const StateRef executed_ref{tx_.core->tx_id, 0};
            const StatePtr& executed = tx_.core->outputs[0];
            if (*fetch_node == ctx.node_id()) {
                const auto& dar = std::get<DataAccessRequestState>(*executed);
                VaultFilter invoices;
                invoices.kind = StateKind::Invoice;
                ok_.data = ledger.vault_query(dar.subject.id, invoices);
            } else {
                data_session_ = ctx.open_session(*fetch_node);
                awaiting_data_ = true;
                ctx.send(data_session_, WarrantDataRequest{executed_ref, executed});
            }
        }
        maybe_finish(ctx);
    }

    void maybe_finish(FlowContext& ctx) {
        if (finalizing_ && pending_acks_.empty() && !awaiting_data_)
            ctx.finish_ok(std::move(ok_));
    }

    flows::FlowRequest request_;
    SignedTransaction tx_;
    std::vector<StatePtr> resolved_inputs_;
    flows::FlowOk ok_;

private:
    std::set<SessionId> pending_signs_;
    std::set<SessionId> pending_acks_;
    SessionId notary_session_ = 0;
    SessionId data_session_ = 0;
    bool awaiting_data_ = false;
    bool finalizing_ = false;
};

class IssueInvoiceFlow final : public ProtoFlow {
public:
    using ProtoFlow::ProtoFlow;

protected:
    std::optional<flows::FlowError> build(FlowContext& ctx) override {
        const auto& payload = std::get<flows::IssueInvoicePayload>(request_.payload);
        auto& ledger = ctx.ledger();
        const AccountRef seller = ctx.lookup_account(request_.initiator);

        AccountRef buyer;
        try {
            buyer = ctx.lookup_account(payload.buyer);
        } catch (const LedgerError&) {
            return flows::FlowError{Errc::SessionFailure, std::nullopt,
                                    "cannot open a session to an unknown buyer account"};
        }

        InvoiceState inv;
        try {
            inv.net_amount = contracts::net_amount(payload.lines->items);
            inv.vat_amount = contracts::vat_amount(payload.lines->items, ctx.config().vat_table);
        } catch (const LedgerError& e) {
            const auto reason = e.code() == Errc::RateMismatch ? ViolationReason::RateMismatch
                                                               : ViolationReason::InvalidLine;
            return flows::FlowError{Errc::ContractViolation, reason, e.what()};
        }
        inv.total_amount = inv.net_amount + inv.vat_amount;
        inv.invoice_id = ledger.next_linear_id();
        inv.seller = seller;
        inv.buyer = buyer;
        inv.lines = payload.lines;
        inv.money_kind = payload.money_kind;
        inv.status = InvoiceStatus::Unpaid;
        // the tax account only becomes a participant once the invoice is
        // paid; unpaid invoices stay between the trading parties
        inv.participants = {seller, buyer};

        auto state = std::make_shared<const LedgerState>(std::move(inv));
        tx_ = ledger.build_and_sign(seller, {}, {state}, Command::IssueInvoice);
        ok_.linear_id = std::get<InvoiceState>(*state).invoice_id;
        return std::nullopt;
    }
};

class PayInvoiceFlow final : public ProtoFlow {
public:
    PayInvoiceFlow(flows::FlowRequest request, bool tokens)
        : ProtoFlow(std::move(request)), tokens_(tokens) {}

protected:
    std::optional<flows::FlowError> build(FlowContext& ctx) override {
        const auto& payload = std::get<flows::PayInvoicePayload>(request_.payload);
        auto& ledger = ctx.ledger();
        const AccountRef buyer = ctx.lookup_account(request_.initiator);

        auto found = ledger.vault_find_by_linear(buyer.id, payload.invoice_id);
        if (!found || !std::holds_alternative<InvoiceState>(*found->second))
            return flows::FlowError{Errc::UnknownInvoice, std::nullopt,
                                    "no such invoice in the buyer's vault"};
        const auto& [ref, state] = *found;
        const auto& inv = std::get<InvoiceState>(*state);

        if (inv.buyer.id != buyer.id)
            return flows::FlowError{Errc::WrongBuyer, std::nullopt,
                                    "only the invoiced buyer can pay"};
        if (inv.status == InvoiceStatus::Paid)
            return flows::FlowError{Errc::ContractViolation, ViolationReason::AlreadyPaid,
                                    "invoice is already paid"};
        const MoneyKind expected = tokens_ ? MoneyKind::Token : MoneyKind::Current;
        if (inv.money_kind != expected)
            return flows::FlowError{Errc::ContractViolation, ViolationReason::WrongMoneyKind,
                                    tokens_ ? "invoice is not payable with tokens"
                                            : "invoice is payable with tokens only"};

        // optimistic funds check; the notary commit re-checks atomically
        if (ledger.get_balance(buyer, inv.money_kind) < inv.total_amount)
            return flows::FlowError{Errc::InsufficientFunds, std::nullopt,
                                    "insufficient funds available"};

        const AccountRef gov = ledger.unique_account(AccountKind::GovPayments);
        InvoiceState paid = inv;
        paid.status = InvoiceStatus::Paid;
        if (ctx.config().split_enabled || tokens_)
            paid.participants = {inv.seller, inv.buyer, gov};
        else
            paid.participants = {inv.seller, inv.buyer};

        auto paid_state = std::make_shared<const LedgerState>(std::move(paid));
        const Command cmd = tokens_ ? Command::PayInvoiceTokens : Command::PayInvoice;
        tx_ = ledger.build_and_sign(buyer, {ref}, {paid_state}, cmd);
        resolved_inputs_ = {state};
        ok_.linear_id = inv.invoice_id;
        return std::nullopt;
    }

private:
    bool tokens_;
};

class IssueTokensFlow final : public ProtoFlow {
public:
    using ProtoFlow::ProtoFlow;

protected:
    std::optional<flows::FlowError> build(FlowContext& ctx) override {
        const auto& payload = std::get<flows::IssueTokensPayload>(request_.payload);
        auto& ledger = ctx.ledger();

        if (ctx.node_role() != NodeRole::HmrcCwp)
            return flows::FlowError{Errc::UnauthorizedIssuer, ViolationReason::UnauthorizedIssuer,
                                    "tokens are issued by the HMRC node only"};
        AccountRef recipient;
        try {
            recipient = ctx.lookup_account(payload.recipient);
        } catch (const LedgerError& e) {
            return from_error(e);
        }
        if (payload.amount <= 0)
            return flows::FlowError{Errc::NonPositiveAmount, ViolationReason::NonPositiveAmount,
                                    "token issuance must carry a positive amount"};

        const AccountRef gov = ledger.unique_account(AccountKind::GovPayments);
        TokenIssuanceState issue;
        issue.issuer = ctx.node_id();
        issue.recipient = recipient;
        issue.amount = payload.amount;
        issue.participants = {recipient, gov};

        auto state = std::make_shared<const LedgerState>(std::move(issue));
        const AccountRef initiator = ctx.lookup_account(request_.initiator);
        tx_ = ledger.build_and_sign(initiator, {}, {state}, Command::IssueTokens);
        return std::nullopt;
    }
};

class RequestWarrantFlow final : public ProtoFlow {
public:
    using ProtoFlow::ProtoFlow;

protected:
    std::optional<flows::FlowError> build(FlowContext& ctx) override {
        const auto& payload = std::get<flows::RequestWarrantPayload>(request_.payload);
        auto& ledger = ctx.ledger();

        const AccountRef requester = ctx.lookup_account(request_.initiator);
        if (requester.kind != AccountKind::GovInvestigator)
            return flows::FlowError{Errc::NotInvestigator, std::nullopt,
                                    "warrants are requested by the investigator account"};
        AccountRef subject;
        try {
            subject = ctx.lookup_account(payload.subject);
        } catch (const LedgerError&) {
            return flows::FlowError{Errc::UnknownSubject, std::nullopt,
                                    "unknown subject account"};
        }
        AccountRef authorizer;
        try {
            authorizer = ledger.unique_account(AccountKind::LegalAuthority);
        } catch (const LedgerError& e) {
            return flows::FlowError{Errc::SessionFailure, std::nullopt, e.what()};
        }

        DataAccessRequestState dar;
        dar.warrant_id = ledger.next_linear_id();
        dar.requester = requester;
        dar.subject = subject;
        dar.authorizer = authorizer;
        dar.status = DarStatus::Authorized;
        dar.authorized_at = ledger.logical_time();
        dar.participants = {requester, authorizer};

        auto state = std::make_shared<const LedgerState>(std::move(dar));
        tx_ = ledger.build_and_sign(requester, {}, {state}, Command::RequestDar);
        ok_.linear_id = std::get<DataAccessRequestState>(*state).warrant_id;
        return std::nullopt;
    }
};

class ExecuteWarrantFlow final : public ProtoFlow {
public:
    using ProtoFlow::ProtoFlow;

protected:
    std::optional<flows::FlowError> build(FlowContext& ctx) override {
        const auto& payload = std::get<flows::ExecuteWarrantPayload>(request_.payload);
        auto& ledger = ctx.ledger();
        const AccountRef requester = ctx.lookup_account(request_.initiator);

        // the warrant is stored on this node; look across the hosted
        // vaults so a mismatched requester is reported as such
        std::optional<std::pair<StateRef, StatePtr>> found =
            ledger.vault_find_by_linear(requester.id, payload.warrant_id);
        if (!found) {
            for (const auto& account : ledger.accounts_on(ctx.node_id())) {
                found = ledger.vault_find_by_linear(account.id, payload.warrant_id);
                if (found) break;
            }
        }
        if (!found || !std::holds_alternative<DataAccessRequestState>(*found->second))
            return flows::FlowError{Errc::UnknownWarrant, std::nullopt,
                                    "no warrant with this id on the requesting node"};
        const auto& [ref, state] = *found;
        const auto& dar = std::get<DataAccessRequestState>(*state);

        if (dar.status == DarStatus::Executed)
            return flows::FlowError{Errc::AlreadyExecuted, ViolationReason::AlreadyExecuted,
                                    "warrant was already executed"};
        if (dar.requester.id != requester.id)
            return flows::FlowError{Errc::NotRequester, ViolationReason::NotRequester,
                                    "warrants execute only for the account that requested them"};

        DataAccessRequestState executed = dar;
        executed.status = DarStatus::Executed;
        executed.executed_at = ledger.logical_time();

        auto executed_state = std::make_shared<const LedgerState>(std::move(executed));
        tx_ = ledger.build_and_sign(requester, {ref}, {executed_state}, Command::ExecuteDar);
        resolved_inputs_ = {state};
        ok_.linear_id = dar.warrant_id;
        subject_host_ = dar.subject.host_node;
        return std::nullopt;
    }

    std::optional<NodeId> data_fetch_node() const override { return subject_host_; }

private:
    std::optional<NodeId> subject_host_;
};

}  // namespace

std::unique_ptr<FlowMachine> make_flow(const flows::FlowRequest& request) {
    switch (request.kind) {
        case flows::FlowKind::IssueInvoice:
            return std::make_unique<IssueInvoiceFlow>(request);
        case flows::FlowKind::PayInvoice:
            return std::make_unique<PayInvoiceFlow>(request, false);
        case flows::FlowKind::PayInvoiceTokens:
            return std::make_unique<PayInvoiceFlow>(request, true);
        case flows::FlowKind::IssueTokens:
            return std::make_unique<IssueTokensFlow>(request);
        case flows::FlowKind::RequestWarrant:
            return std::make_unique<RequestWarrantFlow>(request);
        case flows::FlowKind::ExecuteWarrant:
            return std::make_unique<ExecuteWarrantFlow>(request);
    }
    throw std::logic_error("unknown flow kind");
}

}  // namespace ledgersim::netsim
