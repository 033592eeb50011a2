// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/fixtures.hpp"

namespace ledgersim::fixtures {

namespace {

constexpr SampleItem kBasket1[] = {
    {"Groceries", 3627, 1},
    {"Energy", 8040, 1},
    {"Groceries", 923, 1},
    {"Books", 9781, 1},
    {"Groceries", 4620, 1},
    {"Children's Clothing", 9159, 2},
    {"Alcohol", 9448, 1},
    {"Adult Clothing", 835, 1},
};

constexpr SampleItem kBasket2[] = {
    {"Groceries", 837, 1},
    {"Groceries", 1004, 1},
    {"Energy", 5090, 1},
    {"Groceries", 392, 1},
    {"Books", 3556, 1},
    {"Groceries", 8921, 1},
    {"Children's Clothing", 6209, 2},
};

std::vector<ItemLine> materialize(std::span<const SampleItem> items,
                                  const contracts::VatRateTable& table) {
    std::vector<ItemLine> lines;
    lines.reserve(items.size());
    for (const auto& it : items)
        lines.push_back({it.item, it.price, it.quantity, table.rate_for(it.item)});
    return lines;
}

}  // namespace

std::span<const SampleItem> basket1_items() { return kBasket1; }
std::span<const SampleItem> basket2_items() { return kBasket2; }

std::vector<ItemLine> basket1(const contracts::VatRateTable& table) {
    return materialize(kBasket1, table);
}

std::vector<ItemLine> basket2(const contracts::VatRateTable& table) {
    return materialize(kBasket2, table);
}

}  // namespace ledgersim::fixtures
