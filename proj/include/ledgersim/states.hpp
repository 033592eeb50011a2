// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "ledgersim/hash.hpp"
#include "ledgersim/types.hpp"

#include <json.hpp>

namespace ledgersim {

enum class InvoiceStatus : std::uint8_t { Unpaid, Paid };
enum class DarStatus : std::uint8_t { Requested, Authorized, Executed };

const char* to_string(InvoiceStatus status);
const char* to_string(DarStatus status);

/// On-ledger record of one sale. A Paid invoice keeps the invoice_id of
/// the Unpaid state it supersedes.
struct InvoiceState {
    LinearId invoice_id = 0;
    AccountRef seller;
    AccountRef buyer;
    LineListPtr lines = make_lines({});
    MoneyKind money_kind = MoneyKind::Current;
    Amount net_amount = 0;
    Amount vat_amount = 0;
    Amount total_amount = 0;
    InvoiceStatus status = InvoiceStatus::Unpaid;
    std::vector<AccountRef> participants;
};

/// Smart-warrant record. Executed is terminal and requires Authorized.
struct DataAccessRequestState {
    LinearId warrant_id = 0;
    AccountRef requester;   // GovInvestigator kind
    AccountRef subject;
    AccountRef authorizer;  // LegalAuthority kind
    DarStatus status = DarStatus::Requested;
    std::optional<std::uint64_t> authorized_at;
    std::optional<std::uint64_t> executed_at;
    std::vector<AccountRef> participants;
};

/// Provenance record for token money put into circulation.
struct TokenIssuanceState {
    NodeId issuer;
    AccountRef recipient;
    Amount amount = 0;
    std::vector<AccountRef> participants;
};

using LedgerState = std::variant<InvoiceState, DataAccessRequestState, TokenIssuanceState>;
using StatePtr = std::shared_ptr<const LedgerState>;

enum class StateKind : std::uint8_t { Invoice, DataAccessRequest, TokenIssuance };

/// Points at one output of one notarized transaction.
struct StateRef {
    Digest tx_id;
    std::uint32_t output_index = 0;

    auto operator<=>(const StateRef&) const = default;
};

StateKind kind_of(const LedgerState& state);
const std::vector<AccountRef>& participants_of(const LedgerState& state);
std::optional<LinearId> linear_id_of(const LedgerState& state);

/// Canonical bytes feed content-derived transaction ids.
void write_canonical(ByteWriter& w, const AccountRef& ref);
void write_canonical(ByteWriter& w, const ItemLine& line);
void write_canonical(ByteWriter& w, const LedgerState& state);
void write_canonical(ByteWriter& w, const StateRef& ref);

/// JSON renderings back the newline-delimited event log.
nlohmann::json to_json(const AccountRef& ref);
nlohmann::json to_json(const ItemLine& line);
nlohmann::json to_json(const LedgerState& state);
nlohmann::json to_json(const StateRef& ref);

bool states_equal(const LedgerState& a, const LedgerState& b);

}  // namespace ledgersim
