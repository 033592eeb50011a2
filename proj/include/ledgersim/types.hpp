// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ledgersim {

/// Minor currency units (pence). All ledger arithmetic is integral.
using Amount = std::int64_t;

using NodeId = std::string;
using AccountId = std::uint64_t;

/// Identifier shared by every version of one evolving state (an invoice
/// or a warrant keeps its linear id from creation to its terminal state).
using LinearId = std::uint64_t;

enum class MoneyKind : std::uint8_t { Current, Token };

enum class AccountKind : std::uint8_t {
    Consumer,
    Seller,
    GovPayments,
    GovInvestigator,
    LegalAuthority,
};

struct AccountRef {
    AccountId id = 0;
    std::string display_name;
    NodeId host_node;
    AccountKind kind = AccountKind::Consumer;

    friend bool operator==(const AccountRef& a, const AccountRef& b) { return a.id == b.id; }
};

/// Per-account committed balances, one counter per money kind.
struct Balances {
    Amount current = 0;
    Amount token = 0;

    Amount& of(MoneyKind kind) { return kind == MoneyKind::Current ? current : token; }
    Amount of(MoneyKind kind) const { return kind == MoneyKind::Current ? current : token; }

    friend bool operator==(const Balances&, const Balances&) = default;
};

/// One invoice line: a goods class, a unit price in minor units, a
/// quantity and the VAT percentage charged on this line.
struct ItemLine {
    std::string item;
    Amount price = 0;
    std::int64_t quantity = 1;
    int vat_rate = 0;

    friend bool operator==(const ItemLine&, const ItemLine&) = default;
};

/// Invoice lines are immutable once assembled and travel through
/// requests, states and messages by reference. The content digest is
/// fixed at construction so transaction hashing does not rescan lines.
using LineList = std::vector<ItemLine>;

struct LineBundle {
    LineList items;
    std::array<std::uint8_t, 32> digest{};
};

using LineListPtr = std::shared_ptr<const LineBundle>;

LineListPtr make_lines(LineList lines);

const char* to_string(MoneyKind kind);
const char* to_string(AccountKind kind);

}  // namespace ledgersim
