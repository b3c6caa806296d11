#ifndef PDMG_VB_HPP
#define PDMG_VB_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdmg/chart.hpp"
#include "pdmg/errors.hpp"
#include "pdmg/lexicon.hpp"
#include "pdmg/model.hpp"

namespace pdmg {

struct Corpus;

/// Variational Dirichlet parameters ω_k.
struct Omega : CategoryTable {};

/// exp(ψ(ω_km) − ψ(Σ_m ω_km)) and its logarithm.
struct ThetaStar : CategoryTable
{
    std::vector<std::vector<double>> log_rows;
};

/// Σ_n Σ_j q(d_nj | s_n) · (occurrences of each item in d_nj).
struct ExpectedCounts : CategoryTable {};

struct SentencePosterior
{
    std::vector<double> weights; // parallel to the sentence's derivations
    double log_normalizer = 0.0; // log Z_n
};

struct EStepResult
{
    std::vector<SentencePosterior> posteriors;
    ExpectedCounts counts;
};

/// A sentence with no derivation reached training.
class CoverageError : public ModelError
{
public:
    CoverageError(std::size_t sentence, const std::string& what)
        : ModelError(what), sentence_{sentence} {}

    std::size_t sentence() const noexcept { return sentence_; }

private:
    std::size_t sentence_;
};

Omega omega_from_alpha(const Alpha& alpha);

/// Throws ModelError if a row comes out above one (or, with two or more
/// entries, not strictly below one).
ThetaStar theta_star(const Omega& omega);

/// derivations[n] lists sentence n's derivations. Per-sentence work may run
/// on several threads; counts are reduced in sentence order, so the result
/// does not depend on the thread count. Throws CoverageError for a sentence
/// with no derivations.
EStepResult e_step(std::span<const std::vector<ItemSequence>> derivations, const ThetaStar& w,
                   unsigned threads = 1);

/// ω = α + counts. Throws ModelError on a shape mismatch.
Omega m_step(const Alpha& alpha, const ExpectedCounts& counts);

/// Σ_n log Z_n − Σ_k KL(Dir(ω_k) ‖ Dir(α_k)).
double elbo_surrogate(const Omega& omega, const Alpha& alpha, std::span<const double> log_normalizers);

/// θ̂_km = ω_km / Σ_m ω_km.
Theta posterior_mean(const Omega& omega);

struct TrainConfig
{
    double tol = 1e-6;
    std::size_t max_iters = 100;
    ParseConfig parse;
    bool skip_unparsed = false;
    unsigned threads = 1;
};

struct TrainState
{
    std::size_t iterations = 0;
    Omega omega;
    Theta theta_mean;
    std::vector<double> elbo_trace; // surrogate at ω⁽⁰⁾, ω⁽¹⁾, ...
    bool converged = false;
    std::vector<std::size_t> unparsed; // skipped sentence indices
    std::vector<SentencePosterior> posteriors; // q under the final ω
};

/// Coordinate ascent from ω⁽⁰⁾ = α over fixed derivation sets. Stops at the
/// first i with |surrogate⁽ⁱ⁺¹⁾ − surrogate⁽ⁱ⁾| < tol (iterations = i) or
/// after max_iters updates (iterations = max_iters).
TrainState fit(const Lexicon& lex, std::span<const std::vector<ItemSequence>> derivations,
               const Alpha& alpha, const TrainConfig& cfg);

/// Parses the corpus once, then runs fit. Unparsed sentences raise
/// CoverageError unless cfg.skip_unparsed, in which case they are dropped
/// and listed in TrainState::unparsed.
TrainState train(const Corpus& corpus, const Lexicon& lex, const Alpha& alpha, const TrainConfig& cfg);

} // namespace pdmg

#endif
