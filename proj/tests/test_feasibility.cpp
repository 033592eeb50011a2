// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include "ledgersim/feasibility.hpp"

using namespace ledgersim;
using namespace ledgersim::feasibility;

TEST_CASE("default configuration passes all thirteen assertion groups") {
    auto report = run_feasibility({});
    CHECK(report.all_passed());
    CHECK(report.checks.size() == 31);  // nine groups of three plus AT10-13
    CHECK(report.first_failure().empty());
    CHECK(report.insufficient_funds_error == "insufficient funds available");
    CHECK(report.disallowed_goods_error ==
          "you cannot pay for invalid goods with money from your token account");

    // every group is represented
    std::set<std::string> ids;
    for (const auto& c : report.checks) ids.insert(c.test_id);
    CHECK(ids.size() == 13);
}

TEST_CASE("two runs are byte-identical") {
    auto a = run_feasibility({});
    auto b = run_feasibility({});
    CHECK(a.event_log == b.event_log);
    CHECK(a.table() == b.table());
    CHECK(!a.event_log.empty());
}

TEST_CASE("allowing alcohol for tokens flips AT8") {
    Options options;
    auto allowed = options.contracts.allowed_goods.items();
    allowed.insert("Alcohol");
    allowed.insert("Adult Clothing");
    options.contracts.allowed_goods = contracts::AllowedGoodsList(allowed);

    auto report = run_feasibility(options);
    CHECK_FALSE(report.all_passed());
    bool at8_failed = false;
    for (const auto& c : report.checks)
        if (c.test_id == "AT8" && !c.passed) at8_failed = true;
    CHECK(at8_failed);
    CHECK(report.first_failure().substr(0, 3) == "AT8");
}

TEST_CASE("zero-rating energy diverges from the frozen tax expectations") {
    Options options;
    auto rates = options.contracts.vat_table.rates();
    rates["Energy"] = 0;
    options.contracts.vat_table = contracts::VatRateTable(rates);

    auto report = run_feasibility(options);
    CHECK_FALSE(report.all_passed());
    bool at3_vat_failed = false;
    for (const auto& c : report.checks)
        if (c.test_id == "AT3" && !c.passed &&
            c.description.find("VAT") != std::string::npos)
            at3_vat_failed = true;
    CHECK(at3_vat_failed);
}

TEST_CASE("report table has one row per check") {
    auto report = run_feasibility({});
    auto table = report.table();
    std::size_t lines = std::count(table.begin(), table.end(), '\n');
    CHECK(lines == report.checks.size() + 2);  // header + rule
    CHECK(table.find("AT13") != std::string::npos);
    CHECK(table.find("False") == std::string::npos);
}
