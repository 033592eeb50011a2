// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

#include "ledgersim/contracts.hpp"
#include "ledgersim/types.hpp"

namespace ledgersim {

/// One document of the shopping-list interchange format: an "amount"
/// declared by the sender (informational only; amounts are always
/// recomputed from the lines), the buyer name, the seller name
/// ("whoAmI") and the item lines.
struct ShoppingListDocument {
    Amount declared_amount = 0;
    std::string buyer;
    std::string seller;
    std::vector<ItemLine> lines;
};

struct ParseOptions {
    bool strict = false;  // strict: vat-rate mismatches are errors
};

/// Parses a JSON array of shopping-list documents. Line vat rates are
/// cross-checked against the table; disagreements become warnings, or
/// errors in strict mode.
std::vector<ShoppingListDocument> parse_shopping_list_json(
    const std::string& text, const contracts::VatRateTable& table,
    const ParseOptions& options = {}, std::vector<std::string>* warnings = nullptr);

std::vector<ShoppingListDocument> parse_shopping_list_file(
    const std::string& path, const contracts::VatRateTable& table,
    const ParseOptions& options = {}, std::vector<std::string>* warnings = nullptr);

}  // namespace ledgersim
