// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/errors.hpp"

namespace ledgersim {

const char* to_string(Errc code) {
    switch (code) {
        case Errc::DuplicateAccountName: return "DuplicateAccountName";
        case Errc::UnknownNode: return "UnknownNode";
        case Errc::UnknownAccount: return "UnknownAccount";
        case Errc::NotParticipant: return "NotParticipant";
        case Errc::UnknownInput: return "UnknownInput";
        case Errc::SignerNotParticipant: return "SignerNotParticipant";
        case Errc::DoubleSpend: return "DoubleSpend";
        case Errc::MissingSignature: return "MissingSignature";
        case Errc::InsufficientFunds: return "InsufficientFunds";
        case Errc::ContractViolation: return "ContractViolation";
        case Errc::UnknownInvoice: return "UnknownInvoice";
        case Errc::WrongBuyer: return "WrongBuyer";
        case Errc::UnauthorizedIssuer: return "UnauthorizedIssuer";
        case Errc::NotInvestigator: return "NotInvestigator";
        case Errc::UnknownSubject: return "UnknownSubject";
        case Errc::AlreadyExecuted: return "AlreadyExecuted";
        case Errc::NotRequester: return "NotRequester";
        case Errc::UnknownWarrant: return "UnknownWarrant";
        case Errc::SessionFailure: return "SessionFailure";
        case Errc::NotaryError: return "NotaryError";
        case Errc::DuplicateNode: return "DuplicateNode";
        case Errc::MissingNotary: return "MissingNotary";
        case Errc::MissingNode: return "MissingNode";
        case Errc::WrongNode: return "WrongNode";
        case Errc::QueueOverflow: return "QueueOverflow";
        case Errc::DeadlockDetected: return "DeadlockDetected";
        case Errc::ConfigViolation: return "ConfigViolation";
        case Errc::IncompleteRun: return "IncompleteRun";
        case Errc::InvalidVol: return "InvalidVol";
        case Errc::EmptyRecords: return "EmptyRecords";
        case Errc::IoError: return "IoError";
        case Errc::ParseError: return "ParseError";
        case Errc::RateMismatch: return "RateMismatch";
        case Errc::InvalidLine: return "InvalidLine";
        case Errc::NonPositiveAmount: return "NonPositiveAmount";
    }
    return "?";
}

const char* to_string(ViolationReason reason) {
    switch (reason) {
        case ViolationReason::WrongVat: return "WrongVat";
        case ViolationReason::WrongNet: return "WrongNet";
        case ViolationReason::WrongTotal: return "WrongTotal";
        case ViolationReason::AlreadyPaid: return "AlreadyPaid";
        case ViolationReason::DisallowedGoods: return "DisallowedGoods";
        case ViolationReason::WrongSigners: return "WrongSigners";
        case ViolationReason::WrongStructure: return "WrongStructure";
        case ViolationReason::WrongMoneyKind: return "WrongMoneyKind";
        case ViolationReason::WrongMovements: return "WrongMovements";
        case ViolationReason::RateMismatch: return "RateMismatch";
        case ViolationReason::InvalidLine: return "InvalidLine";
        case ViolationReason::NotRequester: return "NotRequester";
        case ViolationReason::WrongAuthority: return "WrongAuthority";
        case ViolationReason::AlreadyExecuted: return "AlreadyExecuted";
        case ViolationReason::UnknownWarrant: return "UnknownWarrant";
        case ViolationReason::UnauthorizedIssuer: return "UnauthorizedIssuer";
        case ViolationReason::NonPositiveAmount: return "NonPositiveAmount";
    }
    return "?";
}

}  // namespace ledgersim
