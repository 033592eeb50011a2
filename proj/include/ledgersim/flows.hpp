// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ledgersim/errors.hpp"
#include "ledgersim/states.hpp"

namespace ledgersim::flows {

enum class FlowKind : std::uint8_t {
    IssueInvoice,
    PayInvoice,
    PayInvoiceTokens,
    IssueTokens,
    RequestWarrant,
    ExecuteWarrant,
};

const char* to_string(FlowKind kind);

struct IssueInvoicePayload {
    AccountId buyer = 0;  // the initiator is the seller
    LineListPtr lines = make_lines({});
    MoneyKind money_kind = MoneyKind::Current;
};

struct PayInvoicePayload {
    LinearId invoice_id = 0;
};

struct IssueTokensPayload {
    AccountId recipient = 0;
    Amount amount = 0;
};

struct RequestWarrantPayload {
    AccountId subject = 0;
};

struct ExecuteWarrantPayload {
    LinearId warrant_id = 0;
};

using FlowPayload = std::variant<IssueInvoicePayload, PayInvoicePayload, IssueTokensPayload,
                                 RequestWarrantPayload, ExecuteWarrantPayload>;

/// A unit of work submitted through a client endpoint. The initiator
/// account must be hosted on the node the client is attached to.
struct FlowRequest {
    FlowKind kind = FlowKind::IssueInvoice;
    AccountId initiator = 0;
    FlowPayload payload;
};

struct FlowError {
    Errc code = Errc::SessionFailure;
    std::optional<ViolationReason> violation;
    std::string message;

    bool is(ViolationReason reason) const { return violation && *violation == reason; }
};

struct FlowOk {
    Digest tx_id;
    std::optional<LinearId> linear_id;  // invoice or warrant id
    std::uint64_t notary_timestamp = 0;
    std::vector<StatePtr> data;  // warrant execution: fetched history
};

struct FlowResult {
    std::variant<FlowOk, FlowError> outcome = FlowError{};
    std::int64_t submitted_at_ns = 0;
    std::int64_t notarized_at_ns = 0;
    std::int64_t distributed_at_ns = 0;

    bool ok() const { return std::holds_alternative<FlowOk>(outcome); }
    const FlowOk& value() const { return std::get<FlowOk>(outcome); }
    const FlowError& error() const { return std::get<FlowError>(outcome); }
};

}  // namespace ledgersim::flows
