// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "ledgersim/contracts.hpp"
#include "ledgersim/transaction.hpp"

namespace ledgersim {

struct NotaryResult {
    Digest tx_id;
    std::uint64_t timestamp = 0;  // notary logical time
};

/// One line of the replayable event log. Commits and deposits both land
/// here, in commit order.
struct EventRecord {
    Digest tx_id;
    std::string command;
    std::vector<StateRef> inputs;
    std::vector<StatePtr> outputs;
    std::uint64_t timestamp = 0;
    // deposits only
    std::optional<AccountId> deposit_account;
    std::optional<MoneyKind> deposit_kind;
    std::optional<Amount> deposit_amount;
};

struct VaultFilter {
    std::optional<StateKind> kind;
    std::optional<InvoiceStatus> invoice_status;
    std::optional<DarStatus> dar_status;
    std::optional<AccountId> counterparty;

    bool matches(const LedgerState& state) const;
};

/// Balances plus per-account current states, reconstructed by replay.
struct LedgerSnapshot {
    std::map<AccountId, Balances> balances;
    std::map<AccountId, std::set<StateRef>> vaults;

    friend bool operator==(const LedgerSnapshot&, const LedgerSnapshot&) = default;
};

/// Shared ledger substrate: the account registry, committed transaction
/// store, notary consumed-set, account balances and account-scoped
/// vaults. The notary commit (uniqueness check, funds check, balance
/// application, timestamping) is one atomic step under a single lock, so
/// two transactions racing for the same input serialize and exactly one
/// wins.
class LedgerCore {
public:
    LedgerCore(std::vector<NodeId> nodes, NodeId hmrc_node,
               contracts::ContractConfig config);

    // -- accounts ---------------------------------------------------------
    AccountRef create_account(const NodeId& node, const std::string& name, AccountKind kind);
    AccountRef lookup_account(AccountId id) const;
    std::optional<AccountRef> find_account(const NodeId& node, const std::string& name) const;
    /// The network's single account of the given government kind.
    AccountRef unique_account(AccountKind kind) const;
    std::vector<AccountRef> accounts_on(const NodeId& node) const;

    Amount get_balance(const AccountRef& account, MoneyKind kind) const;
    Amount get_balance(AccountId account, MoneyKind kind) const;

    /// External issuance: credits an account outside any flow (initial
    /// funding). Logged so replay reconstructs identical balances.
    void deposit(const AccountRef& account, MoneyKind kind, Amount amount);

    // -- transactions -----------------------------------------------------
    /// Assembles a transaction for the command, derives signer set and
    /// movements, and attaches the initiator's signature. tx_id is fixed
    /// here; later tampering is detectable by recomputing the hash.
    SignedTransaction build_and_sign(const AccountRef& initiator,
                                     std::vector<StateRef> inputs,
                                     std::vector<StatePtr> outputs,
                                     Command command) const;

    /// Uniqueness-and-timestamp commit. On success marks every input
    /// consumed, applies balance movements, assigns the logical
    /// timestamp and the notary signature.
    NotaryResult notarize(SignedTransaction& tx);

    // -- vaults -----------------------------------------------------------
    void record_state(const AccountRef& account, const StatePtr& state, const Digest& origin_tx);
    std::vector<StatePtr> vault_query(const AccountRef& account, const VaultFilter& filter) const;
    std::vector<StatePtr> vault_query(AccountId account, const VaultFilter& filter) const;
    /// Current vault state carrying this linear id, with its ref.
    std::optional<std::pair<StateRef, StatePtr>> vault_find_by_linear(AccountId account,
                                                                      LinearId linear_id) const;

    // -- introspection ----------------------------------------------------
    StatePtr resolve(const StateRef& ref) const;
    bool is_consumed(const StateRef& ref) const;
    TxCorePtr committed_tx(const Digest& tx_id) const;
    std::vector<TxCorePtr> committed_transactions() const;
    std::vector<EventRecord> event_log() const;
    /// Newline-delimited JSON, one record per commit, deterministic bytes.
    std::string event_log_ndjson() const;

    std::uint64_t logical_time() const;
    LinearId next_linear_id();

    LedgerSnapshot snapshot() const;
    static LedgerSnapshot replay(const std::vector<EventRecord>& log);

    const NodeId& hmrc_node() const { return hmrc_node_; }
    const contracts::ContractConfig& config() const { return config_; }
    bool has_node(const NodeId& node) const { return nodes_.contains(node); }

private:
    void record_state_locked(AccountId account, const StatePtr& state, const StateRef& ref);
    StatePtr resolve_locked(const StateRef& ref) const;

    std::set<NodeId> nodes_;
    NodeId hmrc_node_;
    contracts::ContractConfig config_;

    mutable std::mutex mu_;
    std::unordered_map<AccountId, AccountRef> accounts_;
    std::map<std::pair<NodeId, std::string>, AccountId> account_names_;
    std::unordered_map<AccountId, Balances> balances_;
    std::map<StateRef, Digest> consumed_;
    std::unordered_map<Digest, TxCorePtr, DigestHash> committed_;
    std::unordered_map<AccountId, std::map<StateRef, StatePtr>> vaults_;
    std::vector<EventRecord> log_;
    std::uint64_t clock_ = 0;
    AccountId next_account_id_ = 1;
    LinearId next_linear_id_ = 1;
};

nlohmann::json to_json(const EventRecord& record);

}  // namespace ledgersim
