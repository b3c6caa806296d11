#ifndef PDMG_MODEL_HPP
#define PDMG_MODEL_HPP

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "pdmg/lexicon.hpp"

namespace pdmg {

using Rng = std::mt19937_64;

/// Per-category real vectors laid out like the lexicon's l_1 .. l_K.
struct CategoryTable
{
    std::vector<std::vector<double>> rows;

    std::size_t num_categories() const noexcept { return rows.size(); }
    double operator[](ItemId id) const { return rows.at(id.category).at(id.index); }
    double& operator[](ItemId id) { return rows.at(id.category).at(id.index); }
    bool matches(const Lexicon& lex) const;
    bool same_shape(const CategoryTable& other) const;

    friend bool operator==(const CategoryTable&, const CategoryTable&) = default;
};

/// Per-category probability vectors θ_k (each sums to one).
struct Theta : CategoryTable {};
/// Dirichlet prior pseudo-counts α_k (strictly positive).
struct Alpha : CategoryTable {};

/// Throws InputError unless rows fit the lexicon and each row is a
/// probability vector (entries ≥ 0, sum within 1e-12 of one).
Theta make_theta(const Lexicon& lex, std::vector<std::vector<double>> rows);
Theta uniform_theta(const Lexicon& lex);
/// Throws InputError unless rows fit the lexicon with every entry > 0.
Alpha make_alpha(const Lexicon& lex, std::vector<std::vector<double>> rows);
Alpha symmetric_alpha(const Lexicon& lex, double value);

/// Lexicon paired with its item probabilities.
class Pdmg
{
public:
    Pdmg(Lexicon lex, Theta theta);

    const Lexicon& lexicon() const noexcept { return lex_; }
    const Theta& theta() const noexcept { return theta_; }

private:
    Lexicon lex_;
    Theta theta_;
};

/// Σ log θ over the items when the sequence is well-formed, −inf otherwise.
/// Throws InputError for items outside the grammar's lexicon.
double log_prob_of_derivation(const Pdmg& g, std::span<const ItemId> seq);
double prob_of_derivation(const Pdmg& g, std::span<const ItemId> seq);

/// log P(d | θ) + Σ_k log Dirichlet(θ_k; α_k). Throws ModelError when the
/// sequence is ill-formed.
double log_joint(const Pdmg& g, std::span<const ItemId> seq, const Alpha& alpha);

/// One Dirichlet draw per category. Gamma variates are drawn in log space so
/// tiny pseudo-counts do not underflow.
Theta sample_theta(const Alpha& alpha, Rng& rng);
Theta sample_theta(const Alpha& alpha, std::uint64_t seed);

struct SamplerConfig
{
    std::size_t max_depth = 64;
    std::size_t max_rejections = 100000;
};

/// Top-down draw: the root from θ of the start category, then one child per
/// selector, depth-first, each from θ of the selected category. Draws that
/// fail the well-formedness check are discarded and redrawn. Throws
/// CapExceeded when a draw nests deeper than max_depth or more than
/// max_rejections draws are discarded.
ItemSequence sample_derivation(const Pdmg& g, std::string_view start, const SamplerConfig& cfg, Rng& rng);
ItemSequence sample_derivation(const Pdmg& g, std::string_view start, const SamplerConfig& cfg,
                               std::uint64_t seed);

} // namespace pdmg

#endif
