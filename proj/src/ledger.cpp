// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/ledger.hpp"

#include <algorithm>

namespace ledgersim {

namespace {

constexpr AccountId kNotaryKeyId = 0;  // reserved; account ids start at 1

const char* kInsufficientFunds = "insufficient funds available";

}  // namespace

bool VaultFilter::matches(const LedgerState& state) const {
    if (kind && kind_of(state) != *kind) return false;
    if (invoice_status) {
        const auto* inv = std::get_if<InvoiceState>(&state);
        if (!inv || inv->status != *invoice_status) return false;
    }
    if (dar_status) {
        const auto* dar = std::get_if<DataAccessRequestState>(&state);
        if (!dar || dar->status != *dar_status) return false;
    }
    if (counterparty) {
        bool hit = false;
        if (const auto* inv = std::get_if<InvoiceState>(&state))
            hit = inv->seller.id == *counterparty || inv->buyer.id == *counterparty;
        else if (const auto* dar = std::get_if<DataAccessRequestState>(&state))
            hit = dar->requester.id == *counterparty || dar->subject.id == *counterparty ||
                  dar->authorizer.id == *counterparty;
        else if (const auto* tok = std::get_if<TokenIssuanceState>(&state))
            hit = tok->recipient.id == *counterparty;
        if (!hit) return false;
    }
    return true;
}

LedgerCore::LedgerCore(std::vector<NodeId> nodes, NodeId hmrc_node,
                       contracts::ContractConfig config)
    : nodes_(nodes.begin(), nodes.end()),
      hmrc_node_(std::move(hmrc_node)),
      config_(std::move(config)) {}

AccountRef LedgerCore::create_account(const NodeId& node, const std::string& name,
                                      AccountKind kind) {
    std::lock_guard lock(mu_);
    if (!nodes_.contains(node))
        throw LedgerError(Errc::UnknownNode, "unknown node: " + node);
    if (account_names_.contains({node, name}))
        throw LedgerError(Errc::DuplicateAccountName,
                          "account name already taken on " + node + ": " + name);
    if (kind == AccountKind::GovPayments || kind == AccountKind::GovInvestigator) {
        if (node != hmrc_node_)
            throw LedgerError(Errc::ConfigViolation,
                              "government accounts are hosted on the HMRC node");
        for (const auto& [id, ref] : accounts_)
            if (ref.kind == kind)
                throw LedgerError(Errc::DuplicateAccountName,
                                  std::string("exactly one ") + to_string(kind) +
                                      " account may exist");
    }
    AccountRef ref{next_account_id_++, name, node, kind};
    accounts_[ref.id] = ref;
    account_names_[{node, name}] = ref.id;
    balances_[ref.id] = Balances{};
    vaults_[ref.id];
    return ref;
}

AccountRef LedgerCore::lookup_account(AccountId id) const {
    std::lock_guard lock(mu_);
    auto it = accounts_.find(id);
    if (it == accounts_.end())
        throw LedgerError(Errc::UnknownAccount, "unknown account id " + std::to_string(id));
    return it->second;
}

std::optional<AccountRef> LedgerCore::find_account(const NodeId& node,
                                                   const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = account_names_.find({node, name});
    if (it == account_names_.end()) return std::nullopt;
    return accounts_.at(it->second);
}

AccountRef LedgerCore::unique_account(AccountKind kind) const {
    std::lock_guard lock(mu_);
    const AccountRef* found = nullptr;
    for (const auto& [id, ref] : accounts_) {
        if (ref.kind != kind) continue;
        if (found)
            throw LedgerError(Errc::ConfigViolation,
                              std::string("multiple accounts of kind ") + to_string(kind));
        found = &ref;
    }
    if (!found)
        throw LedgerError(Errc::UnknownAccount,
                          std::string("no account of kind ") + to_string(kind));
    return *found;
}

std::vector<AccountRef> LedgerCore::accounts_on(const NodeId& node) const {
    std::lock_guard lock(mu_);
    std::vector<AccountRef> out;
    for (const auto& [key, id] : account_names_)
        if (key.first == node) out.push_back(accounts_.at(id));
    return out;
}

Amount LedgerCore::get_balance(const AccountRef& account, MoneyKind kind) const {
    return get_balance(account.id, kind);
}

Amount LedgerCore::get_balance(AccountId account, MoneyKind kind) const {
    std::lock_guard lock(mu_);
    auto it = balances_.find(account);
    if (it == balances_.end())
        throw LedgerError(Errc::UnknownAccount, "unknown account id " + std::to_string(account));
    return it->second.of(kind);
}

void LedgerCore::deposit(const AccountRef& account, MoneyKind kind, Amount amount) {
    if (amount <= 0)
        throw LedgerError(Errc::NonPositiveAmount, "deposit must be positive");
    std::lock_guard lock(mu_);
    auto it = balances_.find(account.id);
    if (it == balances_.end())
        throw LedgerError(Errc::UnknownAccount, "unknown account: " + account.display_name);
    it->second.of(kind) += amount;

    EventRecord rec;
    rec.command = "Deposit";
    rec.timestamp = ++clock_;
    rec.deposit_account = account.id;
    rec.deposit_kind = kind;
    rec.deposit_amount = amount;
    ByteWriter w;
    w.str("ledgersim.deposit.v1");
    w.u64(account.id);
    w.u8(static_cast<std::uint8_t>(kind));
    w.i64(amount);
    w.u64(rec.timestamp);
    rec.tx_id = w.digest();
    log_.push_back(std::move(rec));
}

SignedTransaction LedgerCore::build_and_sign(const AccountRef& initiator,
                                             std::vector<StateRef> inputs,
                                             std::vector<StatePtr> outputs,
                                             Command command) const {
    AccountRef gov;
    if (command != Command::RequestDar && command != Command::ExecuteDar)
        gov = unique_account(AccountKind::GovPayments);

    {
        std::lock_guard lock(mu_);
        for (const auto& ref : inputs) {
            if (!resolve_locked(ref))
                throw LedgerError(Errc::UnknownInput,
                                  "input does not resolve: " + ref.tx_id.hex());
            if (consumed_.contains(ref))
                throw LedgerError(Errc::DoubleSpend,
                                  "input already consumed: " + ref.tx_id.hex());
        }
    }

    auto signers = contracts::required_signers_for(command, outputs, config_, gov);
    const bool is_signer = std::ranges::any_of(
        signers, [&](const AccountRef& s) { return s.id == initiator.id; });
    if (!is_signer)
        throw LedgerError(Errc::SignerNotParticipant,
                          initiator.display_name + " is not a required signer for " +
                              std::string(to_string(command)));
    auto movements = contracts::movements_for(command, outputs, config_, gov);

    SignedTransaction tx;
    tx.core = make_tx_core(std::move(inputs), std::move(outputs), command, std::move(signers),
                           std::move(movements));
    tx.add_signature(initiator.id, default_signer().sign(initiator.id, tx.core->tx_id));
    return tx;
}

NotaryResult LedgerCore::notarize(SignedTransaction& tx) {
    std::lock_guard lock(mu_);
    const auto& core = *tx.core;

    for (const auto& signer : core.required_signers) {
        auto it = tx.signatures.find(signer.id);
        if (it == tx.signatures.end() ||
            !default_signer().verify(signer.id, core.tx_id, it->second))
            throw LedgerError(Errc::MissingSignature,
                              "missing signature: " + signer.display_name);
    }

    if (committed_.contains(core.tx_id))
        throw LedgerError(Errc::DoubleSpend, "transaction already notarized");
    for (const auto& ref : core.inputs) {
        if (consumed_.contains(ref))
            throw LedgerError(Errc::DoubleSpend, "input already consumed: " + ref.tx_id.hex());
        if (!resolve_locked(ref))
            throw LedgerError(Errc::UnknownInput, "input does not resolve: " + ref.tx_id.hex());
    }

    // authoritative funds check: no balance may cross zero
    std::map<std::pair<AccountId, MoneyKind>, Amount> deltas;
    for (const auto& m : core.movements) deltas[{m.account, m.kind}] += m.delta;
    for (const auto& [key, delta] : deltas) {
        auto it = balances_.find(key.first);
        if (it == balances_.end())
            throw LedgerError(Errc::UnknownAccount,
                              "movement names unknown account " + std::to_string(key.first));
        if (it->second.of(key.second) + delta < 0)
            throw LedgerError(Errc::InsufficientFunds, kInsufficientFunds);
    }

    // commit point: uniqueness, balances and timestamp move together
    for (const auto& ref : core.inputs) consumed_[ref] = core.tx_id;
    for (const auto& [key, delta] : deltas) balances_[key.first].of(key.second) += delta;
    const std::uint64_t ts = ++clock_;
    committed_[core.tx_id] = tx.core;
    tx.timestamp = ts;
    tx.notary_signature = default_signer().sign(kNotaryKeyId, core.tx_id);

    EventRecord rec;
    rec.tx_id = core.tx_id;
    rec.command = to_string(core.command);
    rec.inputs = core.inputs;
    rec.outputs = core.outputs;
    rec.timestamp = ts;
    log_.push_back(std::move(rec));

    return NotaryResult{core.tx_id, ts};
}

void LedgerCore::record_state_locked(AccountId account, const StatePtr& state,
                                     const StateRef& ref) {
    auto& vault = vaults_[account];
    // a new version of a linear state supersedes the version it replaces
    if (auto lid = linear_id_of(*state)) {
        for (auto it = vault.begin(); it != vault.end();) {
            if (it->first != ref && linear_id_of(*it->second) == lid)
                it = vault.erase(it);
            else
                ++it;
        }
    }
    vault[ref] = state;
}

void LedgerCore::record_state(const AccountRef& account, const StatePtr& state,
                              const Digest& origin_tx) {
    std::lock_guard lock(mu_);
    if (!accounts_.contains(account.id))
        throw LedgerError(Errc::UnknownAccount, "unknown account: " + account.display_name);
    auto it = committed_.find(origin_tx);
    if (it == committed_.end())
        throw LedgerError(Errc::UnknownInput,
                          "state does not come from a notarized transaction");
    const auto& outputs = it->second->outputs;
    std::uint32_t index = 0;
    bool found = false;
    for (std::uint32_t i = 0; i < outputs.size(); ++i) {
        if (outputs[i] == state || states_equal(*outputs[i], *state)) {
            index = i;
            found = true;
            break;
        }
    }
    if (!found)
        throw LedgerError(Errc::UnknownInput, "state is not an output of the given transaction");

    const auto& parts = participants_of(*state);
    const bool participant = std::ranges::any_of(
        parts, [&](const AccountRef& p) { return p.id == account.id; });
    if (!participant)
        throw LedgerError(Errc::NotParticipant,
                          account.display_name + " is not a participant of this state");
    record_state_locked(account.id, state, StateRef{origin_tx, index});
}

std::vector<StatePtr> LedgerCore::vault_query(const AccountRef& account,
                                              const VaultFilter& filter) const {
    return vault_query(account.id, filter);
}

std::vector<StatePtr> LedgerCore::vault_query(AccountId account, const VaultFilter& filter) const {
    std::lock_guard lock(mu_);
    auto it = vaults_.find(account);
    if (it == vaults_.end())
        throw LedgerError(Errc::UnknownAccount, "unknown account id " + std::to_string(account));
    std::vector<StatePtr> out;
    for (const auto& [ref, state] : it->second)
        if (filter.matches(*state)) out.push_back(state);
    return out;
}

std::optional<std::pair<StateRef, StatePtr>> LedgerCore::vault_find_by_linear(
    AccountId account, LinearId linear_id) const {
    std::lock_guard lock(mu_);
    auto it = vaults_.find(account);
    if (it == vaults_.end()) return std::nullopt;
    for (const auto& [ref, state] : it->second)
        if (linear_id_of(*state) == linear_id) return std::make_pair(ref, state);
    return std::nullopt;
}

StatePtr LedgerCore::resolve_locked(const StateRef& ref) const {
    auto it = committed_.find(ref.tx_id);
    if (it == committed_.end()) return nullptr;
    if (ref.output_index >= it->second->outputs.size()) return nullptr;
    return it->second->outputs[ref.output_index];
}

StatePtr LedgerCore::resolve(const StateRef& ref) const {
    std::lock_guard lock(mu_);
    return resolve_locked(ref);
}

bool LedgerCore::is_consumed(const StateRef& ref) const {
    std::lock_guard lock(mu_);
    return consumed_.contains(ref);
}

TxCorePtr LedgerCore::committed_tx(const Digest& tx_id) const {
    std::lock_guard lock(mu_);
    auto it = committed_.find(tx_id);
    return it == committed_.end() ? nullptr : it->second;
}

std::vector<TxCorePtr> LedgerCore::committed_transactions() const {
    std::lock_guard lock(mu_);
    std::vector<TxCorePtr> out;
    out.reserve(committed_.size());
    for (const auto& [id, core] : committed_) out.push_back(core);
    return out;
}

std::vector<EventRecord> LedgerCore::event_log() const {
    std::lock_guard lock(mu_);
    return log_;
}

std::uint64_t LedgerCore::logical_time() const {
    std::lock_guard lock(mu_);
    return clock_;
}

LinearId LedgerCore::next_linear_id() {
    std::lock_guard lock(mu_);
    return next_linear_id_++;
}

nlohmann::json to_json(const EventRecord& record) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& in : record.inputs) inputs.push_back(to_json(in));
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& out : record.outputs) outputs.push_back(to_json(*out));
    if (record.deposit_account) {
        outputs.push_back({{"type", "deposit"},
                           {"account", *record.deposit_account},
                           {"kind", to_string(*record.deposit_kind)},
                           {"amount", *record.deposit_amount}});
    }
    return {{"tx_id", record.tx_id.hex()},
            {"command", record.command},
            {"inputs", inputs},
            {"outputs", outputs},
            {"timestamp", record.timestamp}};
}

std::string LedgerCore::event_log_ndjson() const {
    auto log = event_log();
    std::string out;
    for (const auto& rec : log) {
        out += to_json(rec).dump();
        out += '\n';
    }
    return out;
}

namespace {

void normalize(LedgerSnapshot& snap) {
    std::erase_if(snap.balances,
                  [](const auto& kv) { return kv.second.current == 0 && kv.second.token == 0; });
    std::erase_if(snap.vaults, [](const auto& kv) { return kv.second.empty(); });
}

}  // namespace

LedgerSnapshot LedgerCore::snapshot() const {
    std::lock_guard lock(mu_);
    LedgerSnapshot snap;
    for (const auto& [id, bal] : balances_) snap.balances[id] = bal;
    for (const auto& [id, vault] : vaults_) {
        auto& refs = snap.vaults[id];
        for (const auto& [ref, state] : vault) refs.insert(ref);
    }
    normalize(snap);
    return snap;
}

LedgerSnapshot LedgerCore::replay(const std::vector<EventRecord>& log) {
    LedgerSnapshot snap;
    std::map<AccountId, std::map<StateRef, StatePtr>> vaults;
    for (const auto& rec : log) {
        if (rec.deposit_account) {
            snap.balances[*rec.deposit_account].of(*rec.deposit_kind) += *rec.deposit_amount;
            continue;
        }
        for (const auto& in : rec.inputs)
            for (auto& [account, vault] : vaults) vault.erase(in);
        for (std::uint32_t i = 0; i < rec.outputs.size(); ++i) {
            const auto& state = rec.outputs[i];
            StateRef ref{rec.tx_id, i};
            for (const auto& p : participants_of(*state)) {
                auto& vault = vaults[p.id];
                if (auto lid = linear_id_of(*state)) {
                    for (auto it = vault.begin(); it != vault.end();) {
                        if (linear_id_of(*it->second) == lid)
                            it = vault.erase(it);
                        else
                            ++it;
                    }
                }
                vault[ref] = state;
            }
        }
        // balance effects reconstructed from committed outputs; split
        // payments are recognisable by the tax participant
        for (const auto& out : rec.outputs) {
            if (const auto* inv = std::get_if<InvoiceState>(out.get())) {
                if (inv->status != InvoiceStatus::Paid) continue;
                const AccountRef* gov = nullptr;
                for (const auto& p : inv->participants)
                    if (p.kind == AccountKind::GovPayments) gov = &p;
                snap.balances[inv->buyer.id].of(inv->money_kind) -= inv->total_amount;
                if (gov) {
                    snap.balances[inv->seller.id].of(inv->money_kind) += inv->net_amount;
                    snap.balances[gov->id].of(inv->money_kind) += inv->vat_amount;
                } else {
                    snap.balances[inv->seller.id].of(inv->money_kind) += inv->total_amount;
                }
            } else if (const auto* tok = std::get_if<TokenIssuanceState>(out.get())) {
                snap.balances[tok->recipient.id].token += tok->amount;
            }
        }
    }
    for (auto& [account, vault] : vaults) {
        auto& refs = snap.vaults[account];
        for (const auto& [ref, state] : vault) refs.insert(ref);
    }
    normalize(snap);
    return snap;
}

}  // namespace ledgersim
