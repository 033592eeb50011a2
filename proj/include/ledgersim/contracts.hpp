// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>

#include "ledgersim/errors.hpp"
#include "ledgersim/transaction.hpp"
#include "ledgersim/types.hpp"

namespace ledgersim::contracts {

/// Goods class -> VAT percent. The default table covers the seven UK
/// retail classes used throughout the test scenarios.
class VatRateTable {
public:
    static VatRateTable uk_default();
    static VatRateTable from_json(const nlohmann::json& doc);

    VatRateTable() = default;
    explicit VatRateTable(std::map<std::string, int> rates);

    /// Throws LedgerError{RateMismatch} for an unknown goods class.
    int rate_for(const std::string& item) const;
    bool contains(const std::string& item) const { return index_.contains(item); }
    /// Ordered view; iteration order is deterministic.
    const std::map<std::string, int>& rates() const { return rates_; }

private:
    std::map<std::string, int> rates_;
    std::unordered_map<std::string, int> index_;
    // classes bucketed by name length; one short memcmp typical
    std::array<std::vector<std::pair<std::string, int>>, 33> by_len_;
};

/// Goods classes purchasable with token money.
class AllowedGoodsList {
public:
    static AllowedGoodsList uk_default();
    static AllowedGoodsList from_json(const nlohmann::json& doc);

    AllowedGoodsList() = default;
    explicit AllowedGoodsList(std::set<std::string> items) : items_(std::move(items)) {}

    bool allows(const std::string& item) const { return items_.contains(item); }
    const std::set<std::string>& items() const { return items_; }

private:
    std::set<std::string> items_;
};

struct ContractConfig {
    VatRateTable vat_table = VatRateTable::uk_default();
    AllowedGoodsList allowed_goods = AllowedGoodsList::uk_default();
    /// When false, payments credit the seller with the full total and the
    /// tax account takes no part in invoices (comparison-run mode).
    bool split_enabled = true;

    static ContractConfig from_json(const nlohmann::json& doc);
    static ContractConfig from_json_file(const std::string& path);
};

/// Sum of price*quantity over the lines. Empty input is 0.
Amount net_amount(std::span<const ItemLine> lines);

/// Per-line VAT, rounded half-up to the minor unit, then summed. Each
/// line's vat_rate must agree with the table for its goods class.
Amount vat_amount(std::span<const ItemLine> lines, const VatRateTable& table);

Amount total_amount(std::span<const ItemLine> lines, const VatRateTable& table);

/// Single-pass net and VAT recomputation (verification hot path).
std::pair<Amount, Amount> net_and_vat(std::span<const ItemLine> lines, const VatRateTable& table);

/// Exact per-line VAT: round_half_up(price * quantity * rate / 100).
Amount line_vat(const ItemLine& line);

/// Signer set a transaction of this command must carry. `gov` is the
/// network's single GovPayments account (ignored where irrelevant).
std::vector<AccountRef> required_signers_for(Command command,
                                             std::span<const StatePtr> outputs,
                                             const ContractConfig& config,
                                             const AccountRef& gov);

/// Balance deltas a transaction of this command must apply.
std::vector<MoneyMovement> movements_for(Command command,
                                         std::span<const StatePtr> outputs,
                                         const ContractConfig& config,
                                         const AccountRef& gov);

/// Invoice rules: structure, recomputed amounts, movement algebra,
/// signer sets, and the allowed-goods restriction for token payment.
std::optional<Violation> verify_invoice(const TxCore& tx,
                                        std::span<const StatePtr> resolved_inputs,
                                        const ContractConfig& config);

/// Smart-warrant rules: single-use execution by the recorded requester,
/// authorized by the recorded legal authority.
std::optional<Violation> verify_data_access(const TxCore& tx,
                                            std::span<const StatePtr> resolved_inputs,
                                            const ContractConfig& config);

/// Token issuance rules: HMRC-node issuer and a positive amount.
std::optional<Violation> verify_token_issue(const TxCore& tx,
                                            const NodeId& hmrc_node,
                                            const ContractConfig& config);

/// Dispatch on tx.command. Every signer runs this before signing.
std::optional<Violation> verify_transaction(const TxCore& tx,
                                            std::span<const StatePtr> resolved_inputs,
                                            const NodeId& hmrc_node,
                                            const ContractConfig& config);

}  // namespace ledgersim::contracts
