// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <vector>

#include "ledgersim/contracts.hpp"

namespace ledgersim::feasibility {

struct Check {
    std::string test_id;  // AT1 .. AT13
    std::string description;
    bool passed = false;
};

struct Report {
    std::vector<Check> checks;
    /// Error strings observed in the failing-payment scenarios, for
    /// message-fidelity checks.
    std::string insufficient_funds_error;
    std::string disallowed_goods_error;
    /// The run's newline-delimited event log; identical across runs with
    /// the same options.
    std::string event_log;

    bool all_passed() const;
    std::string first_failure() const;  // "ATn: description", or empty
    std::string table() const;          // printable report, one row per check
};

struct Options {
    std::uint64_t seed = 0;
    contracts::ContractConfig contracts;
};

/// Boots a deterministic five-node network and runs the four payment
/// scenarios plus the smart-warrant scenario, evaluating the thirteen
/// assertion groups. Expected balance deltas are frozen constants, so a
/// reconfigured rate table or allowed-goods list shows up as failures.
Report run_feasibility(const Options& options = {});

}  // namespace ledgersim::feasibility
