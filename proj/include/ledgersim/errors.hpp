// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ledgersim {

enum class Errc {
    // accounts / vaults
    DuplicateAccountName,
    UnknownNode,
    UnknownAccount,
    NotParticipant,
    // transaction assembly / notarisation
    UnknownInput,
    SignerNotParticipant,
    DoubleSpend,
    MissingSignature,
    InsufficientFunds,
    // flows
    ContractViolation,
    UnknownInvoice,
    WrongBuyer,
    UnauthorizedIssuer,
    NotInvestigator,
    UnknownSubject,
    AlreadyExecuted,
    NotRequester,
    UnknownWarrant,
    SessionFailure,
    NotaryError,
    // network
    DuplicateNode,
    MissingNotary,
    MissingNode,
    WrongNode,
    QueueOverflow,
    DeadlockDetected,
    // harness / cli
    ConfigViolation,
    IncompleteRun,
    InvalidVol,
    EmptyRecords,
    IoError,
    ParseError,
    // contracts
    RateMismatch,
    InvalidLine,
    NonPositiveAmount,
};

const char* to_string(Errc code);

class LedgerError : public std::runtime_error {
public:
    LedgerError(Errc code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

/// Reason a contract rejected a proposed transaction.
enum class ViolationReason {
    WrongVat,
    WrongNet,
    WrongTotal,
    AlreadyPaid,
    DisallowedGoods,
    WrongSigners,
    WrongStructure,
    WrongMoneyKind,
    WrongMovements,
    RateMismatch,
    InvalidLine,
    NotRequester,
    WrongAuthority,
    AlreadyExecuted,
    UnknownWarrant,
    UnauthorizedIssuer,
    NonPositiveAmount,
};

const char* to_string(ViolationReason reason);

struct Violation {
    ViolationReason reason;
    std::string detail;
};

}  // namespace ledgersim
