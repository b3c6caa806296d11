#include "pdmg/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pdmg/errors.hpp"
#include "pdmg/special.hpp"
#include "pdmg/wellformed.hpp"

namespace pdmg {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void check_shape(const Lexicon& lex, const std::vector<std::vector<double>>& rows, const char* what)
{
    const auto sizes = lex.category_sizes();
    if (rows.size() != sizes.size())
        throw InputError(std::string(what) + " has " + std::to_string(rows.size())
                         + " categories, lexicon has " + std::to_string(sizes.size()));
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (rows[k].size() != sizes[k])
            throw InputError(std::string(what) + " row for category '" + lex.categories()[k] + "' has "
                             + std::to_string(rows[k].size()) + " entries, expected "
                             + std::to_string(sizes[k]));
    }
}

double log_gamma_variate(double shape, Rng& rng)
{
    if (shape >= 1.0) {
        std::gamma_distribution<double> gamma(shape, 1.0);
        return std::log(gamma(rng));
    }
    // Gamma(a) = Gamma(a + 1) · U^(1/a)
    std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = 1.0 - unit(rng); // (0, 1]
    return std::log(gamma(rng)) + std::log(u) / shape;
}

} // namespace

bool CategoryTable::matches(const Lexicon& lex) const
{
    const auto sizes = lex.category_sizes();
    if (rows.size() != sizes.size()) return false;
    for (std::size_t k = 0; k < sizes.size(); ++k)
        if (rows[k].size() != sizes[k]) return false;
    return true;
}

bool CategoryTable::same_shape(const CategoryTable& other) const
{
    if (rows.size() != other.rows.size()) return false;
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].size() != other.rows[k].size()) return false;
    return true;
}

Theta make_theta(const Lexicon& lex, std::vector<std::vector<double>> rows)
{
    check_shape(lex, rows, "theta");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double sum = 0.0;
        for (double v : rows[k]) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw InputError("theta for category '" + lex.categories()[k] + "' has an invalid entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw InputError("theta for category '" + lex.categories()[k] + "' sums to "
                             + std::to_string(sum));
    }
    Theta t;
    t.rows = std::move(rows);
    return t;
}

Theta uniform_theta(const Lexicon& lex)
{
    Theta t;
    for (auto m : lex.category_sizes()) t.rows.emplace_back(m, 1.0 / static_cast<double>(m));
    return t;
}

Alpha make_alpha(const Lexicon& lex, std::vector<std::vector<double>> rows)
{
    check_shape(lex, rows, "alpha");
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (double v : rows[k])
            if (!(v > 0.0) || !std::isfinite(v))
                throw InputError("alpha for category '" + lex.categories()[k] + "' must be positive");
    Alpha a;
    a.rows = std::move(rows);
    return a;
}

Alpha symmetric_alpha(const Lexicon& lex, double value)
{
    std::vector<std::vector<double>> rows;
    for (auto m : lex.category_sizes()) rows.emplace_back(m, value);
    return make_alpha(lex, std::move(rows));
}

Pdmg::Pdmg(Lexicon lex, Theta theta) : lex_{std::move(lex)}, theta_{make_theta(lex_, std::move(theta.rows))} {}

double log_prob_of_derivation(const Pdmg& g, std::span<const ItemId> seq)
{
    for (auto id : seq) g.lexicon().item(id);
    if (!is_wellformed(g.lexicon(), seq)) return neg_inf;
    double out = 0.0;
    for (auto id : seq) out += std::log(g.theta()[id]);
    return out;
}

double prob_of_derivation(const Pdmg& g, std::span<const ItemId> seq)
{
    return std::exp(log_prob_of_derivation(g, seq));
}

double log_joint(const Pdmg& g, std::span<const ItemId> seq, const Alpha& alpha)
{
    if (!alpha.matches(g.lexicon())) throw ModelError("alpha does not match the lexicon");
    for (auto id : seq) g.lexicon().item(id);
    if (!is_wellformed(g.lexicon(), seq)) throw ModelError("log_joint needs a well-formed derivation");
    double out = 0.0;
    for (auto id : seq) out += std::log(g.theta()[id]);
    for (std::size_t k = 0; k < alpha.rows.size(); ++k)
        out += log_dirichlet_density(g.theta().rows[k], alpha.rows[k]);
    return out;
}

Theta sample_theta(const Alpha& alpha, Rng& rng)
{
    Theta t;
    for (const auto& row : alpha.rows) {
        std::vector<double> logs;
        logs.reserve(row.size());
        for (double a : row) logs.push_back(log_gamma_variate(a, rng));
        const double norm = log_sum_exp(logs);
        std::vector<double> out;
        out.reserve(row.size());
        for (double l : logs) out.push_back(std::exp(l - norm));
        t.rows.push_back(std::move(out));
    }
    return t;
}

Theta sample_theta(const Alpha& alpha, std::uint64_t seed)
{
    Rng rng(seed);
    return sample_theta(alpha, rng);
}

namespace {

class TopDownSampler
{
public:
    TopDownSampler(const Pdmg& g, const SamplerConfig& cfg, Rng& rng) : g_{g}, cfg_{cfg}, rng_{rng} {}

    // Returns false when a selector names a category with no items.
    bool expand(std::size_t category, std::size_t depth, ItemSequence& out)
    {
        if (depth > cfg_.max_depth)
            throw CapExceeded("sampled derivation nests deeper than max_depth ("
                              + std::to_string(cfg_.max_depth) + ")");
        if (out.size() >= max_items)
            throw CapExceeded("sampled derivation exceeds " + std::to_string(max_items) + " items");
        const auto& row = g_.theta().rows[category];
        std::discrete_distribution<std::size_t> pick(row.begin(), row.end());
        const ItemId id{category, pick(rng_)};
        out.push_back(id);
        for (const auto& f : g_.lexicon().item(id).features) {
            if (!is_selector(f)) continue;
            const auto k = g_.lexicon().category_index(f.name);
            if (!k) return false;
            if (!expand(*k, depth + 1, out)) return false;
        }
        return true;
    }

private:
    static constexpr std::size_t max_items = 1u << 16;

    const Pdmg& g_;
    const SamplerConfig& cfg_;
    Rng& rng_;
};

} // namespace

ItemSequence sample_derivation(const Pdmg& g, std::string_view start, const SamplerConfig& cfg, Rng& rng)
{
    const auto root = g.lexicon().category_index(start);
    if (!root) throw InputError("unknown start category '" + std::string(start) + "'");
    TopDownSampler sampler(g, cfg, rng);
    for (std::size_t rejected = 0; rejected <= cfg.max_rejections; ++rejected) {
        ItemSequence seq;
        if (sampler.expand(*root, 0, seq) && is_wellformed(g.lexicon(), seq)) return seq;
    }
    throw CapExceeded("no well-formed derivation after " + std::to_string(cfg.max_rejections)
                      + " rejections");
}

ItemSequence sample_derivation(const Pdmg& g, std::string_view start, const SamplerConfig& cfg,
                               std::uint64_t seed)
{
    Rng rng(seed);
    return sample_derivation(g, start, cfg, rng);
}

} // namespace pdmg
