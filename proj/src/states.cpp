// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/states.hpp"

namespace ledgersim {

LineListPtr make_lines(LineList lines) {
    auto bundle = std::make_shared<LineBundle>();
    bundle->items = std::move(lines);
    ByteWriter w;
    w.reserve(64 * bundle->items.size() + 16);
    w.u32(static_cast<std::uint32_t>(bundle->items.size()));
    for (const auto& line : bundle->items) write_canonical(w, line);
    bundle->digest = w.digest().bytes;
    return bundle;
}

const char* to_string(MoneyKind kind) {
    return kind == MoneyKind::Current ? "Current" : "Token";
}

const char* to_string(AccountKind kind) {
    switch (kind) {
        case AccountKind::Consumer: return "Consumer";
        case AccountKind::Seller: return "Seller";
        case AccountKind::GovPayments: return "GovPayments";
        case AccountKind::GovInvestigator: return "GovInvestigator";
        case AccountKind::LegalAuthority: return "LegalAuthority";
    }
    return "?";
}

const char* to_string(InvoiceStatus status) {
    return status == InvoiceStatus::Unpaid ? "Unpaid" : "Paid";
}

const char* to_string(DarStatus status) {
    switch (status) {
        case DarStatus::Requested: return "Requested";
        case DarStatus::Authorized: return "Authorized";
        case DarStatus::Executed: return "Executed";
    }
    return "?";
}

StateKind kind_of(const LedgerState& state) {
    if (std::holds_alternative<InvoiceState>(state)) return StateKind::Invoice;
    if (std::holds_alternative<DataAccessRequestState>(state)) return StateKind::DataAccessRequest;
    return StateKind::TokenIssuance;
}

const std::vector<AccountRef>& participants_of(const LedgerState& state) {
    return std::visit([](const auto& s) -> const std::vector<AccountRef>& { return s.participants; },
                      state);
}

std::optional<LinearId> linear_id_of(const LedgerState& state) {
    if (const auto* inv = std::get_if<InvoiceState>(&state)) return inv->invoice_id;
    if (const auto* dar = std::get_if<DataAccessRequestState>(&state)) return dar->warrant_id;
    return std::nullopt;
}

void write_canonical(ByteWriter& w, const AccountRef& ref) {
    w.u64(ref.id);
    w.str(ref.display_name);
    w.str(ref.host_node);
    w.u8(static_cast<std::uint8_t>(ref.kind));
}

void write_canonical(ByteWriter& w, const ItemLine& line) {
    w.str(line.item);
    w.i64(line.price);
    w.i64(line.quantity);
    w.u32(static_cast<std::uint32_t>(line.vat_rate));
}

void write_canonical(ByteWriter& w, const StateRef& ref) {
    w.raw(ref.tx_id.bytes.data(), ref.tx_id.bytes.size());
    w.u32(ref.output_index);
}

namespace {

void write_participants(ByteWriter& w, const std::vector<AccountRef>& parts) {
    w.u32(static_cast<std::uint32_t>(parts.size()));
    for (const auto& p : parts) write_canonical(w, p);
}

}  // namespace

void write_canonical(ByteWriter& w, const LedgerState& state) {
    std::visit(
        [&w](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, InvoiceState>) {
                w.u8(0);
                w.u64(s.invoice_id);
                write_canonical(w, s.seller);
                write_canonical(w, s.buyer);
                w.raw(s.lines->digest.data(), s.lines->digest.size());
                w.u8(static_cast<std::uint8_t>(s.money_kind));
                w.i64(s.net_amount);
                w.i64(s.vat_amount);
                w.i64(s.total_amount);
                w.u8(static_cast<std::uint8_t>(s.status));
                write_participants(w, s.participants);
            } else if constexpr (std::is_same_v<T, DataAccessRequestState>) {
                w.u8(1);
                w.u64(s.warrant_id);
                write_canonical(w, s.requester);
                write_canonical(w, s.subject);
                write_canonical(w, s.authorizer);
                w.u8(static_cast<std::uint8_t>(s.status));
                w.u64(s.authorized_at.value_or(0));
                w.u64(s.executed_at.value_or(0));
                write_participants(w, s.participants);
            } else {
                w.u8(2);
                w.str(s.issuer);
                write_canonical(w, s.recipient);
                w.i64(s.amount);
                write_participants(w, s.participants);
            }
        },
        state);
}

nlohmann::json to_json(const AccountRef& ref) {
    return {{"id", ref.id},
            {"name", ref.display_name},
            {"host", ref.host_node},
            {"kind", to_string(ref.kind)}};
}

nlohmann::json to_json(const ItemLine& line) {
    return {{"item", line.item},
            {"price", line.price},
            {"quantity", line.quantity},
            {"vatRate", line.vat_rate}};
}

nlohmann::json to_json(const StateRef& ref) {
    return {{"tx_id", ref.tx_id.hex()}, {"index", ref.output_index}};
}

nlohmann::json to_json(const LedgerState& state) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : participants_of(state)) parts.push_back(to_json(p));
    return std::visit(
        [&parts](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, InvoiceState>) {
                nlohmann::json lines = nlohmann::json::array();
                for (const auto& line : s.lines->items) lines.push_back(to_json(line));
                return {{"type", "invoice"},
                        {"invoice_id", s.invoice_id},
                        {"seller", to_json(s.seller)},
                        {"buyer", to_json(s.buyer)},
                        {"lines", lines},
                        {"money_kind", to_string(s.money_kind)},
                        {"net", s.net_amount},
                        {"vat", s.vat_amount},
                        {"total", s.total_amount},
                        {"status", to_string(s.status)},
                        {"participants", parts}};
            } else if constexpr (std::is_same_v<T, DataAccessRequestState>) {
                nlohmann::json doc{{"type", "data_access_request"},
                                   {"warrant_id", s.warrant_id},
                                   {"requester", to_json(s.requester)},
                                   {"subject", to_json(s.subject)},
                                   {"authorizer", to_json(s.authorizer)},
                                   {"status", to_string(s.status)},
                                   {"participants", parts}};
                if (s.authorized_at) doc["authorized_at"] = *s.authorized_at;
                if (s.executed_at) doc["executed_at"] = *s.executed_at;
                return doc;
            } else {
                return {{"type", "token_issuance"},
                        {"issuer", s.issuer},
                        {"recipient", to_json(s.recipient)},
                        {"amount", s.amount},
                        {"participants", parts}};
            }
        },
        state);
}

bool states_equal(const LedgerState& a, const LedgerState& b) {
    ByteWriter wa, wb;
    write_canonical(wa, a);
    write_canonical(wb, b);
    return wa.bytes() == wb.bytes();
}

}  // namespace ledgersim
