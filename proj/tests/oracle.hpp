// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Test-only brute-force oracle for invoice arithmetic. Deliberately a
// separate computation route from the library (floating point with an
// explicit half-up floor instead of scaled integer division) so the two
// can disagree if either is wrong. Keep it independent of ledgersim
// internals: include only public value types.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "ledgersim/types.hpp"

namespace oracle {

inline std::int64_t line_vat(const ledgersim::ItemLine& line) {
    long double raw = static_cast<long double>(line.price) *
                      static_cast<long double>(line.quantity) *
                      static_cast<long double>(line.vat_rate) / 100.0L;
    return static_cast<std::int64_t>(std::floor(raw + 0.5L));
}

inline std::int64_t net(std::span<const ledgersim::ItemLine> lines) {
    long double sum = 0.0L;
    for (const auto& line : lines)
        sum += static_cast<long double>(line.price) * static_cast<long double>(line.quantity);
    return static_cast<std::int64_t>(std::llroundl(sum));
}

inline std::int64_t vat(std::span<const ledgersim::ItemLine> lines) {
    std::int64_t sum = 0;
    for (const auto& line : lines) sum += line_vat(line);
    return sum;
}

inline std::int64_t total(std::span<const ledgersim::ItemLine> lines) {
    return net(lines) + vat(lines);
}

}  // namespace oracle
