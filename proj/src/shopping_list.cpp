// Copyright 2026 the ledgersim developers. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "ledgersim/shopping_list.hpp"

#include <fstream>
#include <sstream>

namespace ledgersim {

namespace {

ItemLine parse_line(const nlohmann::json& doc, std::size_t doc_index, std::size_t line_index) {
    auto context = [&](const char* field) {
        return "document " + std::to_string(doc_index) + ", line " + std::to_string(line_index) +
               ", field '" + field + "'";
    };
    ItemLine line;
    try {
        line.item = doc.at("item").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw LedgerError(Errc::ParseError, "missing or invalid " + context("item"));
    }
    try {
        line.price = doc.at("price").get<Amount>();
    } catch (const nlohmann::json::exception&) {
        throw LedgerError(Errc::ParseError, "missing or invalid " + context("price"));
    }
    try {
        line.quantity = doc.at("quantity").get<std::int64_t>();
    } catch (const nlohmann::json::exception&) {
        throw LedgerError(Errc::ParseError, "missing or invalid " + context("quantity"));
    }
    try {
        line.vat_rate = doc.at("vatRate").get<int>();
    } catch (const nlohmann::json::exception&) {
        throw LedgerError(Errc::ParseError, "missing or invalid " + context("vatRate"));
    }
    return line;
}

}  // namespace

std::vector<ShoppingListDocument> parse_shopping_list_json(
    const std::string& text, const contracts::VatRateTable& table, const ParseOptions& options,
    std::vector<std::string>* warnings) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw LedgerError(Errc::ParseError, e.what());
    }
    if (!root.is_array())
        throw LedgerError(Errc::ParseError, "top level must be an array of documents");

    std::vector<ShoppingListDocument> docs;
    for (std::size_t i = 0; i < root.size(); ++i) {
        const auto& entry = root[i];
        ShoppingListDocument doc;
        try {
            doc.declared_amount = entry.value("amount", Amount{0});
            doc.buyer = entry.at("buyer").get<std::string>();
            doc.seller = entry.at("whoAmI").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw LedgerError(Errc::ParseError,
                              "document " + std::to_string(i) + ": " + e.what());
        }
        if (!entry.contains("shoppingList") || !entry.at("shoppingList").is_array())
            throw LedgerError(Errc::ParseError,
                              "document " + std::to_string(i) + ": missing shoppingList array");
        const auto& list = entry.at("shoppingList");
        for (std::size_t j = 0; j < list.size(); ++j) {
            auto line = parse_line(list[j], i, j);
            if (!table.contains(line.item) || table.rate_for(line.item) != line.vat_rate) {
                std::ostringstream msg;
                msg << "document " << i << ", line " << j << ": vatRate " << line.vat_rate
                    << " for '" << line.item << "' disagrees with the configured table";
                if (options.strict) throw LedgerError(Errc::RateMismatch, msg.str());
                if (warnings) warnings->push_back(msg.str());
            }
            doc.lines.push_back(std::move(line));
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<ShoppingListDocument> parse_shopping_list_file(
    const std::string& path, const contracts::VatRateTable& table, const ParseOptions& options,
    std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw LedgerError(Errc::IoError, "cannot open shopping list: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_shopping_list_json(buf.str(), table, options, warnings);
}

}  // namespace ledgersim
