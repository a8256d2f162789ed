#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "states.hpp"

namespace qdiv {

/// A state loaded from a document: mixed or pure.
using State = std::variant<DensityMatrix, PureState>;

namespace detail {

inline std::string describe_position(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline std::vector<Complex> parse_entries(const nlohmann::json& doc, std::size_t expected) {
    const auto& raw = doc.at("entries");
    if (!raw.is_array())
        throw ParseError("field \"entries\": expected an array of [re, im] pairs");
    if (raw.size() != expected)
        throw ParseError("field \"entries\": expected " + std::to_string(expected) +
                         " pairs, got " + std::to_string(raw.size()));
    std::vector<Complex> entries;
    entries.reserve(expected);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const auto& pair = raw[k];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw ParseError("field \"entries[" + std::to_string(k) +
                             "]\": expected a [re, im] number pair");
        entries.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    return entries;
}

}  // namespace detail

/// Parses the state file format:
///   {"kind": "density"|"pure", "dim": n, "entries": [[re, im], ...]}
/// with row-major matrix entries for "density" and vector entries for "pure".
inline State parse_state_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed state document at " +
                         detail::describe_position(text, e.byte) + ": " + e.what());
    }

    try {
        if (!doc.is_object()) throw ParseError("state document must be a JSON object");
        for (const std::string field : {"kind", "dim", "entries"})
            if (!doc.contains(field)) throw ParseError("missing field \"" + field + "\"");
        if (!doc["kind"].is_string())
            throw ParseError("field \"kind\": expected \"density\" or \"pure\"");
        const std::string kind = doc["kind"].get<std::string>();
        if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::uint64_t>() == 0)
            throw ParseError("field \"dim\": expected a positive integer");
        const auto dim = doc["dim"].get<std::size_t>();

        if (kind == "density") {
            std::vector<Complex> entries = detail::parse_entries(doc, dim * dim);
            try {
                return DensityMatrix(ComplexMatrix(dim, std::move(entries)));
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ValidationError(std::string("invalid density matrix: ") + e.what());
            }
        }
        if (kind == "pure") {
            std::vector<Complex> entries = detail::parse_entries(doc, dim);
            try {
                return PureState(std::move(entries));
            } catch (const Error& e) {
                throw ValidationError(std::string("invalid pure state: ") + e.what());
            }
        }
        throw ParseError("field \"kind\": expected \"density\" or \"pure\", got \"" + kind + "\"");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed state document: ") + e.what());
    }
}

namespace detail {

inline nlohmann::ordered_json entries_json(const std::vector<Complex>& entries) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Complex& z : entries) arr.push_back({z.real(), z.imag()});
    return arr;
}

}  // namespace detail

inline std::string to_state_json(const DensityMatrix& rho) {
    nlohmann::ordered_json doc;
    doc["kind"] = "density";
    doc["dim"] = rho.dim();
    doc["entries"] = detail::entries_json(rho.matrix().entries());
    return doc.dump() + "\n";
}

inline std::string to_state_json(const PureState& psi) {
    nlohmann::ordered_json doc;
    doc["kind"] = "pure";
    doc["dim"] = psi.dim();
    doc["entries"] = detail::entries_json(psi.amplitudes());
    return doc.dump() + "\n";
}

inline State load_state_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open state file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_state_json(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

}  // namespace qdiv
