#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gagt/format.hpp"
#include "gagt/knapsack.hpp"

namespace gagt {

// Raised on malformed instance files. token_index and line are 1-based and
// refer to the position where parsing stopped (0 when not applicable, e.g.
// for JSON schema errors).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t token_index = 0, std::size_t line = 0)
        : std::runtime_error(message), token_index(token_index), line(line) {}

    std::size_t token_index;
    std::size_t line;
};

namespace detail {

class TokenReader {
public:
    explicit TokenReader(std::string_view text) : text_(text) {}

    std::optional<std::string_view> next_token() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            if (text_[pos_] == '\n') ++line_;
            ++pos_;
        }
        if (pos_ >= text_.size()) return std::nullopt;
        std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        ++token_index_;
        return text_.substr(start, pos_ - start);
    }

    double next_number(const char* what) {
        auto token = next_token();
        if (!token)
            throw ParseError(std::string("unexpected end of input: expected ") + what +
                                 " (token " + std::to_string(token_index_ + 1) + ", line " + std::to_string(line_) + ")",
                             token_index_ + 1, line_);
        auto value = parse_double(*token);
        if (!value)
            throw ParseError(std::string("expected a number for ") + what + ", got '" + std::string(*token) +
                                 "' (token " + std::to_string(token_index_) + ", line " + std::to_string(line_) + ")",
                             token_index_, line_);
        return *value;
    }

    double next_non_negative(const char* what) {
        double value = next_number(what);
        if (value < 0.0)
            throw ParseError(std::string("negative ") + what + " " + format_double(value) +
                                 " (token " + std::to_string(token_index_) + ", line " + std::to_string(line_) + ")",
                             token_index_, line_);
        return value;
    }

    std::size_t next_count(const char* what) {
        double value = next_number(what);
        if (value < 0.0 || value != static_cast<double>(static_cast<std::size_t>(value)))
            throw ParseError(std::string("expected a non-negative integer for ") + what + ", got " + format_double(value) +
                                 " (token " + std::to_string(token_index_) + ", line " + std::to_string(line_) + ")",
                             token_index_, line_);
        return static_cast<std::size_t>(value);
    }

    std::size_t token_index() const { return token_index_; }
    std::size_t line() const { return line_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t token_index_ = 0;
};

} // namespace detail

// OR-library mknap format: problem count; then per problem n, m, optimum
// (0 = unknown), n profits, m rows of n weights, m capacities. Whitespace
// delimited, line breaks not significant.
inline std::vector<KnapsackInstance> parse_orlib_mknap(std::string_view text) {
    detail::TokenReader reader(text);
    std::size_t problem_count = reader.next_count("problem count");
    std::vector<KnapsackInstance> instances;
    for (std::size_t p = 0; p < problem_count; ++p) {
        KnapsackInstance inst;
        std::size_t n = reader.next_count("item count");
        std::size_t m = reader.next_count("sack count");
        if (n < 1)
            throw ParseError("item count must be at least 1 (token " + std::to_string(reader.token_index()) + ")",
                             reader.token_index(), reader.line());
        if (m < 1)
            throw ParseError("sack count must be at least 1 (token " + std::to_string(reader.token_index()) + ")",
                             reader.token_index(), reader.line());
        // A count the remaining input cannot possibly satisfy is a malformed
        // header, not a request to allocate.
        if (n > text.size() || m > text.size() || m > text.size() / n)
            throw ParseError("item/sack counts (" + std::to_string(n) + ", " + std::to_string(m) +
                                 ") exceed what the input could hold (token " + std::to_string(reader.token_index()) + ")",
                             reader.token_index(), reader.line());
        double optimum = reader.next_non_negative("optimum");
        if (optimum != 0.0) inst.best_known = optimum;
        inst.values.reserve(n);
        for (std::size_t j = 0; j < n; ++j) inst.values.push_back(reader.next_non_negative("profit"));
        inst.weights.assign(m, {});
        for (std::size_t s = 0; s < m; ++s) {
            inst.weights[s].reserve(n);
            for (std::size_t j = 0; j < n; ++j) inst.weights[s].push_back(reader.next_non_negative("weight"));
        }
        inst.capacities.reserve(m);
        for (std::size_t s = 0; s < m; ++s) inst.capacities.push_back(reader.next_non_negative("capacity"));
        validate_instance(inst);
        instances.push_back(std::move(inst));
    }
    if (auto extra = reader.next_token())
        throw ParseError("unexpected trailing token '" + std::string(*extra) + "' (token " +
                             std::to_string(reader.token_index()) + ", line " + std::to_string(reader.line()) + ")",
                         reader.token_index(), reader.line());
    return instances;
}

// Inverse of parse_orlib_mknap at the data level (names are not part of the
// format and are dropped).
inline std::string serialize_orlib_mknap(const std::vector<KnapsackInstance>& instances) {
    std::ostringstream out;
    out << instances.size() << "\n";
    for (const auto& inst : instances) {
        out << inst.n_items() << " " << inst.n_sacks() << " " << format_double(inst.best_known.value_or(0.0)) << "\n";
        for (std::size_t j = 0; j < inst.n_items(); ++j)
            out << format_double(inst.values[j]) << (j + 1 == inst.n_items() ? "\n" : " ");
        for (const auto& row : inst.weights)
            for (std::size_t j = 0; j < row.size(); ++j)
                out << format_double(row[j]) << (j + 1 == row.size() ? "\n" : " ");
        for (std::size_t s = 0; s < inst.n_sacks(); ++s)
            out << format_double(inst.capacities[s]) << (s + 1 == inst.n_sacks() ? "\n" : " ");
    }
    return out.str();
}

// JSON instance document: {"name": ..., "values": [...], "weights": [[...]],
// "capacities": [...], "best_known": ...}. name and best_known are optional.
inline KnapsackInstance parse_json_instance(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0, 0);
    }
    if (!doc.is_object()) throw ParseError("instance document must be a JSON object");

    auto require_key = [&](const char* key) -> const nlohmann::json& {
        auto it = doc.find(key);
        if (it == doc.end()) throw ParseError(std::string("missing key '") + key + "'");
        return *it;
    };
    auto number_array = [](const nlohmann::json& node, const char* key) {
        if (!node.is_array()) throw ParseError(std::string("key '") + key + "' must be an array of numbers");
        std::vector<double> out;
        out.reserve(node.size());
        for (const auto& item : node) {
            if (!item.is_number()) throw ParseError(std::string("key '") + key + "' must contain only numbers");
            out.push_back(item.get<double>());
        }
        return out;
    };

    KnapsackInstance inst;
    if (auto it = doc.find("name"); it != doc.end()) {
        if (!it->is_string()) throw ParseError("key 'name' must be a string");
        inst.name = it->get<std::string>();
    }
    inst.values = number_array(require_key("values"), "values");
    const auto& weights_node = require_key("weights");
    if (!weights_node.is_array()) throw ParseError("key 'weights' must be a matrix (array of arrays)");
    for (const auto& row : weights_node) inst.weights.push_back(number_array(row, "weights"));
    inst.capacities = number_array(require_key("capacities"), "capacities");
    if (auto it = doc.find("best_known"); it != doc.end() && !it->is_null()) {
        if (!it->is_number()) throw ParseError("key 'best_known' must be a number");
        inst.best_known = it->get<double>();
    }
    try {
        validate_instance(inst);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return inst;
}

inline std::string serialize_json_instance(const KnapsackInstance& inst) {
    nlohmann::json doc;
    doc["name"] = inst.name;
    doc["values"] = inst.values;
    doc["weights"] = inst.weights;
    doc["capacities"] = inst.capacities;
    if (inst.best_known) doc["best_known"] = *inst.best_known;
    return doc.dump(2) + "\n";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Loads an instance from disk; format chosen by extension (.json for the
// JSON document format, anything else OR-library mknap). `index` selects a
// problem from multi-problem OR-library files.
inline KnapsackInstance load_instance(const std::string& path, std::size_t index = 0) {
    auto stem = [&]() {
        std::size_t slash = path.find_last_of("/\\");
        std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
        std::size_t dot = base.find_last_of('.');
        return dot == std::string::npos ? base : base.substr(0, dot);
    };
    bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    try {
        if (is_json) {
            if (index != 0) throw ParseError("JSON instance files hold a single problem; index must be 0");
            KnapsackInstance inst = parse_json_instance(read_file(path));
            if (inst.name.empty()) inst.name = stem();
            return inst;
        }
        auto instances = parse_orlib_mknap(read_file(path));
        if (index >= instances.size())
            throw ParseError("instance index " + std::to_string(index) + " out of range; file holds " +
                             std::to_string(instances.size()) + " problem(s)");
        KnapsackInstance inst = std::move(instances[index]);
        if (inst.name.empty()) inst.name = instances.size() == 1 ? stem() : stem() + "#" + std::to_string(index);
        return inst;
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.token_index, e.line);
    }
}

} // namespace gagt
