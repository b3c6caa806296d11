#ifndef PDMG_SERIALIZATION_HPP
#define PDMG_SERIALIZATION_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdmg/lexicon.hpp"
#include "pdmg/model.hpp"
#include "pdmg/vb.hpp"

namespace pdmg {

using Json = nlohmann::ordered_json;

/// {"category": [v_1, ..., v_M], ...} with categories in lexicon order.
Json table_to_json(const Lexicon& lex, const CategoryTable& table);
/// Inverse of table_to_json; keys may come in any order but must name
/// exactly the lexicon's categories. Throws InputError.
std::vector<std::vector<double>> table_rows_from_json(const Lexicon& lex, const Json& j);

Theta load_theta(const Lexicon& lex, const std::filesystem::path& path);
Alpha load_alpha(const Lexicon& lex, const std::filesystem::path& path);

/// {"omega", "theta_mean", "elbo_trace", "iterations", "converged", "unparsed"}.
Json train_result_json(const Lexicon& lex, const TrainState& state);

/// Pretty-printed with a trailing newline. Doubles use the shortest form
/// that reads back to the same value.
std::string dump(const Json& j);

} // namespace pdmg

#endif
