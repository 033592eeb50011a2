// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ledgersim/states.hpp"

namespace ledgersim {

enum class Command : std::uint8_t {
    IssueInvoice,
    PayInvoice,
    PayInvoiceTokens,
    IssueTokens,
    RequestDar,
    ExecuteDar,
};

const char* to_string(Command command);

/// Balance delta applied atomically when the transaction commits.
struct MoneyMovement {
    AccountId account = 0;
    MoneyKind kind = MoneyKind::Current;
    Amount delta = 0;

    friend bool operator==(const MoneyMovement&, const MoneyMovement&) = default;
};

/// Immutable transaction content. tx_id is the SHA-256 of the canonical
/// serialization of every other field, so any mutation changes the id.
struct TxCore {
    Digest tx_id;
    std::vector<StateRef> inputs;
    std::vector<StatePtr> outputs;
    Command command = Command::IssueInvoice;
    std::vector<AccountRef> required_signers;
    std::vector<MoneyMovement> movements;
};

using TxCorePtr = std::shared_ptr<const TxCore>;

TxCorePtr make_tx_core(std::vector<StateRef> inputs, std::vector<StatePtr> outputs,
                       Command command, std::vector<AccountRef> required_signers,
                       std::vector<MoneyMovement> movements);

/// Recomputes the content hash of a core; equals core.tx_id unless the
/// core was tampered with after construction.
Digest compute_tx_id(const TxCore& core);

struct Signature {
    Digest value;

    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Swappable signing scheme. The default derives signatures from the
/// signer id and the transaction id; real asymmetric crypto can be
/// slotted in without touching callers.
class SignerInterface {
public:
    virtual ~SignerInterface() = default;
    virtual Signature sign(AccountId signer, const Digest& tx_id) const = 0;
    virtual bool verify(AccountId signer, const Digest& tx_id, const Signature& sig) const = 0;
};

class MockSigner final : public SignerInterface {
public:
    Signature sign(AccountId signer, const Digest& tx_id) const override;
    bool verify(AccountId signer, const Digest& tx_id, const Signature& sig) const override;
};

const SignerInterface& default_signer();

struct SignedTransaction {
    TxCorePtr core;
    std::map<AccountId, Signature> signatures;
    std::optional<Signature> notary_signature;
    std::optional<std::uint64_t> timestamp;  // notary logical time

    const Digest& tx_id() const { return core->tx_id; }
    bool fully_signed() const;
    void add_signature(AccountId signer, const Signature& sig) { signatures[signer] = sig; }
};

}  // namespace ledgersim
