// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <span>
#include <vector>

#include "ledgersim/contracts.hpp"
#include "ledgersim/types.hpp"

namespace ledgersim::fixtures {

/// Item, unit price and quantity for the two sample baskets shipped in
/// data/. Basket 1 mixes all three VAT bands and includes goods outside
/// the token allowed list; basket 2 contains allowed goods only.
struct SampleItem {
    const char* item;
    Amount price;
    std::int64_t quantity;
};

std::span<const SampleItem> basket1_items();
std::span<const SampleItem> basket2_items();

/// Materialize a basket as invoice lines. VAT rates come from the active
/// table so a reconfigured table propagates into the generated invoices.
std::vector<ItemLine> basket1(const contracts::VatRateTable& table);
std::vector<ItemLine> basket2(const contracts::VatRateTable& table);

}  // namespace ledgersim::fixtures
