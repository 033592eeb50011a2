// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/transaction.hpp"

#include <algorithm>

namespace ledgersim {

const char* to_string(Command command) {
    switch (command) {
        case Command::IssueInvoice: return "IssueInvoice";
        case Command::PayInvoice: return "PayInvoice";
        case Command::PayInvoiceTokens: return "PayInvoiceTokens";
        case Command::IssueTokens: return "IssueTokens";
        case Command::RequestDar: return "RequestDAR";
        case Command::ExecuteDar: return "ExecuteDAR";
    }
    return "?";
}

Digest compute_tx_id(const TxCore& core) {
    std::size_t estimate = 256 + 128 * core.outputs.size();
    for (const auto& out : core.outputs)
        if (const auto* inv = std::get_if<InvoiceState>(out.get()))
            estimate += 64;  // line digest
    ByteWriter w;
    w.reserve(estimate);
    w.u8(static_cast<std::uint8_t>(core.command));
    w.u32(static_cast<std::uint32_t>(core.inputs.size()));
    for (const auto& in : core.inputs) write_canonical(w, in);
    w.u32(static_cast<std::uint32_t>(core.outputs.size()));
    for (const auto& out : core.outputs) write_canonical(w, *out);
    w.u32(static_cast<std::uint32_t>(core.required_signers.size()));
    for (const auto& signer : core.required_signers) write_canonical(w, signer);
    w.u32(static_cast<std::uint32_t>(core.movements.size()));
    for (const auto& m : core.movements) {
        w.u64(m.account);
        w.u8(static_cast<std::uint8_t>(m.kind));
        w.i64(m.delta);
    }
    return w.digest();
}

TxCorePtr make_tx_core(std::vector<StateRef> inputs, std::vector<StatePtr> outputs,
                       Command command, std::vector<AccountRef> required_signers,
                       std::vector<MoneyMovement> movements) {
    auto core = std::make_shared<TxCore>();
    core->inputs = std::move(inputs);
    core->outputs = std::move(outputs);
    core->command = command;
    core->required_signers = std::move(required_signers);
    core->movements = std::move(movements);
    core->tx_id = compute_tx_id(*core);
    return core;
}

Signature MockSigner::sign(AccountId signer, const Digest& tx_id) const {
    ByteWriter w;
    w.str("ledgersim.sig.v1");
    w.u64(signer);
    w.raw(tx_id.bytes.data(), tx_id.bytes.size());
    return Signature{w.digest()};
}

bool MockSigner::verify(AccountId signer, const Digest& tx_id, const Signature& sig) const {
    return sign(signer, tx_id) == sig;
}

const SignerInterface& default_signer() {
    static MockSigner signer;
    return signer;
}

bool SignedTransaction::fully_signed() const {
    return std::ranges::all_of(core->required_signers, [this](const AccountRef& signer) {
        auto it = signatures.find(signer.id);
        return it != signatures.end() && default_signer().verify(signer.id, core->tx_id, it->second);
    });
}

}  // namespace ledgersim
