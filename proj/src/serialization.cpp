#include "pdmg/serialization.hpp"

#include <fstream>
#include <set>

#include "pdmg/errors.hpp"

namespace pdmg {

namespace {

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

} // namespace

Json table_to_json(const Lexicon& lex, const CategoryTable& table)
{
    if (!table.matches(lex)) throw ModelError("table does not match the lexicon");
    Json out = Json::object();
    for (std::size_t k = 0; k < lex.num_categories(); ++k) out[lex.categories()[k]] = table.rows[k];
    return out;
}

std::vector<std::vector<double>> table_rows_from_json(const Lexicon& lex, const Json& j)
{
    if (!j.is_object()) throw InputError("expected a JSON object keyed by category");
    std::set<std::string> seen;
    std::vector<std::vector<double>> rows(lex.num_categories());
    for (const auto& [key, value] : j.items()) {
        const auto k = lex.category_index(key);
        if (!k) throw InputError("unknown category '" + key + "'");
        seen.insert(key);
        if (!value.is_array()) throw InputError("category '" + key + "' must map to an array");
        for (const auto& v : value) {
            if (!v.is_number()) throw InputError("category '" + key + "' has a non-numeric entry");
            rows[*k].push_back(v.get<double>());
        }
    }
    for (const auto& name : lex.categories())
        if (!seen.contains(name)) throw InputError("missing category '" + name + "'");
    return rows;
}

Theta load_theta(const Lexicon& lex, const std::filesystem::path& path)
{
    return make_theta(lex, table_rows_from_json(lex, read_json(path)));
}

Alpha load_alpha(const Lexicon& lex, const std::filesystem::path& path)
{
    return make_alpha(lex, table_rows_from_json(lex, read_json(path)));
}

Json train_result_json(const Lexicon& lex, const TrainState& state)
{
    Json out = Json::object();
    out["omega"] = table_to_json(lex, state.omega);
    out["theta_mean"] = table_to_json(lex, state.theta_mean);
    out["elbo_trace"] = state.elbo_trace;
    out["iterations"] = state.iterations;
    out["converged"] = state.converged;
    out["unparsed"] = state.unparsed;
    return out;
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

} // namespace pdmg
