// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/contracts.hpp"

#include <algorithm>
#include <fstream>

namespace ledgersim::contracts {

namespace {

constexpr int kLegalRates[] = {0, 5, 20};

const char* kTokenGoodsError =
    "you cannot pay for invalid goods with money from your token account";

void check_line(const ItemLine& line) {
    if (line.price < 0 || line.quantity < 1)
        throw LedgerError(Errc::InvalidLine,
                          "invalid line: price must be >= 0 and quantity >= 1 (" + line.item + ")");
}

}  // namespace

VatRateTable::VatRateTable(std::map<std::string, int> rates) : rates_(std::move(rates)) {
    for (const auto& [item, rate] : rates_) {
        if (!std::ranges::count(kLegalRates, rate))
            throw LedgerError(Errc::RateMismatch,
                              "unsupported VAT rate " + std::to_string(rate) + " for " + item);
    }
    index_.insert(rates_.begin(), rates_.end());
    for (const auto& [item, rate] : rates_)
        if (item.size() < by_len_.size()) by_len_[item.size()].emplace_back(item, rate);
}

VatRateTable VatRateTable::uk_default() {
    return VatRateTable({{"Adult Clothing", 20},
                         {"Alcohol", 20},
                         {"Books", 0},
                         {"Children's Clothing", 0},
                         {"Electrical", 20},
                         {"Energy", 5},
                         {"Groceries", 0}});
}

VatRateTable VatRateTable::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw LedgerError(Errc::ParseError, "vat_rates must be an object");
    std::map<std::string, int> rates;
    for (const auto& [item, rate] : doc.items()) {
        if (!rate.is_number_integer())
            throw LedgerError(Errc::ParseError, "vat rate for " + item + " must be an integer");
        rates[item] = rate.get<int>();
    }
    return VatRateTable(std::move(rates));
}

int VatRateTable::rate_for(const std::string& item) const {
    if (item.size() < by_len_.size()) {
        for (const auto& [name, rate] : by_len_[item.size()])
            if (name == item) return rate;
        throw LedgerError(Errc::RateMismatch, "unknown goods class: " + item);
    }
    auto it = index_.find(item);
    if (it == index_.end())
        throw LedgerError(Errc::RateMismatch, "unknown goods class: " + item);
    return it->second;
}

AllowedGoodsList AllowedGoodsList::uk_default() {
    return AllowedGoodsList({"Groceries", "Energy", "Books", "Children's Clothing"});
}

AllowedGoodsList AllowedGoodsList::from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw LedgerError(Errc::ParseError, "allowed_goods must be an array");
    std::set<std::string> items;
    for (const auto& item : doc) items.insert(item.get<std::string>());
    return AllowedGoodsList(std::move(items));
}

ContractConfig ContractConfig::from_json(const nlohmann::json& doc) {
    ContractConfig cfg;
    if (doc.contains("vat_rates")) cfg.vat_table = VatRateTable::from_json(doc.at("vat_rates"));
    if (doc.contains("allowed_goods"))
        cfg.allowed_goods = AllowedGoodsList::from_json(doc.at("allowed_goods"));
    if (doc.contains("split_enabled")) cfg.split_enabled = doc.at("split_enabled").get<bool>();
    return cfg;
}

ContractConfig ContractConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LedgerError(Errc::IoError, "cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw LedgerError(Errc::ParseError, "config parse error: " + std::string(e.what()));
    }
    return from_json(doc);
}

Amount net_amount(std::span<const ItemLine> lines) {
    Amount sum = 0;
    for (const auto& line : lines) {
        check_line(line);
        sum += line.price * line.quantity;
    }
    return sum;
}

Amount line_vat(const ItemLine& line) {
    // round half-up on non-negative integers: floor((x + 50) / 100)
    const Amount scaled = line.price * line.quantity * line.vat_rate;
    return (scaled + 50) / 100;
}

Amount vat_amount(std::span<const ItemLine> lines, const VatRateTable& table) {
    Amount sum = 0;
    for (const auto& line : lines) {
        check_line(line);
        const int expected = table.rate_for(line.item);
        if (line.vat_rate != expected)
            throw LedgerError(Errc::RateMismatch,
                              "vat rate " + std::to_string(line.vat_rate) + " for " + line.item +
                                  " does not match the configured " + std::to_string(expected));
        sum += line_vat(line);
    }
    return sum;
}

Amount total_amount(std::span<const ItemLine> lines, const VatRateTable& table) {
    return net_amount(lines) + vat_amount(lines, table);
}

std::pair<Amount, Amount> net_and_vat(std::span<const ItemLine> lines, const VatRateTable& table) {
    Amount net = 0, vat = 0;
    for (const auto& line : lines) {
        check_line(line);
        const int expected = table.rate_for(line.item);
        if (line.vat_rate != expected)
            throw LedgerError(Errc::RateMismatch,
                              "vat rate " + std::to_string(line.vat_rate) + " for " + line.item +
                                  " does not match the configured " + std::to_string(expected));
        net += line.price * line.quantity;
        vat += line_vat(line);
    }
    return {net, vat};
}

std::vector<AccountRef> required_signers_for(Command command, std::span<const StatePtr> outputs,
                                             const ContractConfig& config, const AccountRef& gov) {
    if (outputs.empty()) return {};
    switch (command) {
        case Command::IssueInvoice:
        case Command::PayInvoice:
        case Command::PayInvoiceTokens: {
            const auto& inv = std::get<InvoiceState>(*outputs[0]);
            std::vector<AccountRef> signers;
            if (command == Command::IssueInvoice)
                signers = {inv.seller, inv.buyer};
            else
                signers = {inv.buyer, inv.seller};
            // token payments always carry the tax leg; plain payments skip
            // it when split payments are disabled
            if (config.split_enabled || command == Command::PayInvoiceTokens)
                signers.push_back(gov);
            return signers;
        }
        case Command::IssueTokens:
            return {gov};
        case Command::RequestDar:
        case Command::ExecuteDar: {
            const auto& dar = std::get<DataAccessRequestState>(*outputs[0]);
            return {dar.requester, dar.authorizer};
        }
    }
    return {};
}

std::vector<MoneyMovement> movements_for(Command command, std::span<const StatePtr> outputs,
                                         const ContractConfig& config, const AccountRef& gov) {
    if (outputs.empty()) return {};
    switch (command) {
        case Command::IssueInvoice:
        case Command::RequestDar:
        case Command::ExecuteDar:
            return {};
        case Command::PayInvoice:
        case Command::PayInvoiceTokens: {
            const auto& inv = std::get<InvoiceState>(*outputs[0]);
            const MoneyKind kind = inv.money_kind;
            if (config.split_enabled || command == Command::PayInvoiceTokens)
                return {{inv.buyer.id, kind, -inv.total_amount},
                        {inv.seller.id, kind, inv.net_amount},
                        {gov.id, kind, inv.vat_amount}};
            return {{inv.buyer.id, kind, -inv.total_amount},
                    {inv.seller.id, kind, inv.total_amount}};
        }
        case Command::IssueTokens: {
            const auto& issue = std::get<TokenIssuanceState>(*outputs[0]);
            return {{issue.recipient.id, MoneyKind::Token, issue.amount}};
        }
    }
    return {};
}

namespace {

bool same_signer_set(const std::vector<AccountRef>& a, const std::vector<AccountRef>& b) {
    if (a.size() != b.size()) return false;
    auto ids = [](const std::vector<AccountRef>& v) {
        std::vector<AccountId> out;
        for (const auto& r : v) out.push_back(r.id);
        std::ranges::sort(out);
        return out;
    };
    return ids(a) == ids(b);
}

std::optional<Violation> check_movements(const TxCore& tx, const InvoiceState& inv,
                                         const ContractConfig& config, const AccountRef& gov) {
    auto expected = movements_for(tx.command, tx.outputs, config, gov);
    if (tx.movements.size() != expected.size())
        return Violation{ViolationReason::WrongMovements,
                         "payment must move money in exactly " +
                             std::to_string(expected.size()) + " legs"};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const auto& got = tx.movements[i];
        const auto& want = expected[i];
        if (got.account != want.account || got.kind != want.kind)
            return Violation{ViolationReason::WrongMovements, "unexpected movement target"};
        if (got.delta != want.delta) {
            if (want.account == gov.id)
                return Violation{ViolationReason::WrongVat,
                                 "tax leg must credit exactly the invoice VAT"};
            if (want.account == inv.seller.id)
                return Violation{ViolationReason::WrongNet,
                                 "seller leg must credit exactly the invoice net"};
            return Violation{ViolationReason::WrongTotal,
                             "buyer leg must debit exactly the invoice total"};
        }
    }
    return std::nullopt;
}

const AccountRef* find_gov(const TxCore& tx) {
    for (const auto& signer : tx.required_signers)
        if (signer.kind == AccountKind::GovPayments) return &signer;
    return nullptr;
}

}  // namespace

std::optional<Violation> verify_invoice(const TxCore& tx, std::span<const StatePtr> resolved_inputs,
                                        const ContractConfig& config) {
    if (tx.outputs.size() != 1 || !std::holds_alternative<InvoiceState>(*tx.outputs[0]))
        return Violation{ViolationReason::WrongStructure,
                         "invoice transactions produce exactly one invoice state"};
    const auto& out = std::get<InvoiceState>(*tx.outputs[0]);

    Amount net = 0, vat = 0;
    try {
        std::tie(net, vat) = net_and_vat(out.lines->items, config.vat_table);
    } catch (const LedgerError& e) {
        return Violation{e.code() == Errc::RateMismatch ? ViolationReason::RateMismatch
                                                        : ViolationReason::InvalidLine,
                         e.what()};
    }
    if (out.vat_amount != vat)
        return Violation{ViolationReason::WrongVat, "cached VAT disagrees with the rate table"};
    if (out.net_amount != net)
        return Violation{ViolationReason::WrongNet, "cached net disagrees with the lines"};
    if (out.total_amount != net + vat)
        return Violation{ViolationReason::WrongTotal, "total must equal net plus VAT"};

    // the tax leg signer, when the mode requires one
    const AccountRef* gov = find_gov(tx);
    const bool needs_gov = config.split_enabled || tx.command == Command::PayInvoiceTokens;
    if (needs_gov && gov == nullptr)
        return Violation{ViolationReason::WrongSigners, "missing GovPayments signer"};
    AccountRef gov_ref = gov ? *gov : AccountRef{};

    auto expected_signers = required_signers_for(tx.command, tx.outputs, config, gov_ref);
    if (!same_signer_set(tx.required_signers, expected_signers))
        return Violation{ViolationReason::WrongSigners, "unexpected signer set"};

    switch (tx.command) {
        case Command::IssueInvoice: {
            if (!tx.inputs.empty())
                return Violation{ViolationReason::WrongStructure, "issue consumes no inputs"};
            if (out.status != InvoiceStatus::Unpaid)
                return Violation{ViolationReason::WrongStructure, "issued invoices start unpaid"};
            if (!tx.movements.empty())
                return Violation{ViolationReason::WrongMovements, "issue moves no money"};
            break;
        }
        case Command::PayInvoice:
        case Command::PayInvoiceTokens: {
            if (tx.inputs.size() != 1 || resolved_inputs.size() != 1 ||
                !std::holds_alternative<InvoiceState>(*resolved_inputs[0]))
                return Violation{ViolationReason::WrongStructure,
                                 "payment consumes exactly one invoice state"};
            const auto& in = std::get<InvoiceState>(*resolved_inputs[0]);
            if (in.status != InvoiceStatus::Unpaid)
                return Violation{ViolationReason::AlreadyPaid, "input invoice is already paid"};
            if (out.status != InvoiceStatus::Paid)
                return Violation{ViolationReason::WrongStructure, "payment output must be paid"};
            const bool same_lines = in.lines == out.lines || in.lines->digest == out.lines->digest;
            if (in.invoice_id != out.invoice_id || !same_lines ||
                in.money_kind != out.money_kind || !(in.seller == out.seller) ||
                !(in.buyer == out.buyer))
                return Violation{ViolationReason::WrongStructure,
                                 "payment must preserve the invoice identity and lines"};
            if (tx.command == Command::PayInvoiceTokens) {
                if (out.money_kind != MoneyKind::Token)
                    return Violation{ViolationReason::WrongMoneyKind,
                                     "token payment requires a token invoice"};
                for (const auto& line : out.lines->items)
                    if (!config.allowed_goods.allows(line.item))
                        return Violation{ViolationReason::DisallowedGoods, kTokenGoodsError};
            } else if (out.money_kind != MoneyKind::Current) {
                return Violation{ViolationReason::WrongMoneyKind,
                                 "current payment requires a current invoice"};
            }
            if (auto v = check_movements(tx, out, config, gov_ref)) return v;
            break;
        }
        default:
            return Violation{ViolationReason::WrongStructure,
                             "not an invoice command"};
    }
    return std::nullopt;
}

std::optional<Violation> verify_data_access(const TxCore& tx,
                                            std::span<const StatePtr> resolved_inputs,
                                            const ContractConfig&) {
    if (tx.outputs.size() != 1 || !std::holds_alternative<DataAccessRequestState>(*tx.outputs[0]))
        return Violation{ViolationReason::WrongStructure,
                         "data access transactions produce exactly one request state"};
    const auto& out = std::get<DataAccessRequestState>(*tx.outputs[0]);

    if (out.requester.kind != AccountKind::GovInvestigator)
        return Violation{ViolationReason::NotRequester,
                         "warrants are requested by an investigator account"};
    if (out.authorizer.kind != AccountKind::LegalAuthority)
        return Violation{ViolationReason::WrongAuthority,
                         "warrants are authorized by the legal authority"};

    std::vector<AccountRef> expected = {out.requester, out.authorizer};
    if (!same_signer_set(tx.required_signers, expected))
        return Violation{ViolationReason::WrongSigners, "unexpected signer set"};
    if (!tx.movements.empty())
        return Violation{ViolationReason::WrongMovements, "warrants move no money"};

    if (tx.command == Command::RequestDar) {
        if (!tx.inputs.empty())
            return Violation{ViolationReason::WrongStructure, "request consumes no inputs"};
        if (out.status != DarStatus::Authorized)
            return Violation{ViolationReason::WrongStructure,
                             "a committed request must be authorized"};
        return std::nullopt;
    }

    // ExecuteDar
    if (tx.inputs.size() != 1 || resolved_inputs.size() != 1 ||
        !std::holds_alternative<DataAccessRequestState>(*resolved_inputs[0]))
        return Violation{ViolationReason::WrongStructure,
                         "execution consumes exactly one request state"};
    const auto& in = std::get<DataAccessRequestState>(*resolved_inputs[0]);
    if (in.status == DarStatus::Executed)
        return Violation{ViolationReason::AlreadyExecuted, "warrant was already executed"};
    if (in.status != DarStatus::Authorized)
        return Violation{ViolationReason::WrongStructure, "only authorized warrants execute"};
    if (out.status != DarStatus::Executed)
        return Violation{ViolationReason::WrongStructure, "execution output must be executed"};
    if (in.warrant_id != out.warrant_id || !(in.subject == out.subject))
        return Violation{ViolationReason::UnknownWarrant,
                         "execution must reference the issued warrant and subject"};
    if (!(in.authorizer == out.authorizer))
        return Violation{ViolationReason::WrongAuthority,
                         "execution must carry the issuing authority"};
    if (!(in.requester == out.requester))
        return Violation{ViolationReason::NotRequester,
                         "execution must be run by the recorded requester"};
    return std::nullopt;
}

std::optional<Violation> verify_token_issue(const TxCore& tx, const NodeId& hmrc_node,
                                            const ContractConfig&) {
    if (tx.outputs.size() != 1 || !std::holds_alternative<TokenIssuanceState>(*tx.outputs[0]))
        return Violation{ViolationReason::WrongStructure,
                         "token issue produces exactly one issuance state"};
    const auto& out = std::get<TokenIssuanceState>(*tx.outputs[0]);
    if (out.issuer != hmrc_node)
        return Violation{ViolationReason::UnauthorizedIssuer,
                         "tokens are issued by the HMRC node only"};
    if (out.amount <= 0)
        return Violation{ViolationReason::NonPositiveAmount,
                         "token issuance must carry a positive amount"};
    if (!tx.inputs.empty())
        return Violation{ViolationReason::WrongStructure, "token issue consumes no inputs"};
    std::vector<MoneyMovement> expected{{out.recipient.id, MoneyKind::Token, out.amount}};
    if (tx.movements != expected)
        return Violation{ViolationReason::WrongMovements,
                         "token issue credits the recipient exactly"};
    return std::nullopt;
}

std::optional<Violation> verify_transaction(const TxCore& tx,
                                            std::span<const StatePtr> resolved_inputs,
                                            const NodeId& hmrc_node,
                                            const ContractConfig& config) {
    switch (tx.command) {
        case Command::IssueInvoice:
        case Command::PayInvoice:
        case Command::PayInvoiceTokens:
            return verify_invoice(tx, resolved_inputs, config);
        case Command::IssueTokens:
            return verify_token_issue(tx, hmrc_node, config);
        case Command::RequestDar:
        case Command::ExecuteDar:
            return verify_data_access(tx, resolved_inputs, config);
    }
    return Violation{ViolationReason::WrongStructure, "unknown command"};
}

}  // namespace ledgersim::contracts
