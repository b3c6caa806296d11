#include "pdmg/vb.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

#include "pdmg/corpus.hpp"
#include "pdmg/special.hpp"

namespace pdmg {

namespace {

// Per-sentence result before the ordered reduction.
struct SentenceWork
{
    SentencePosterior posterior;
    std::vector<std::pair<ItemId, double>> counts; // sorted by id
};

SentenceWork score_sentence(std::size_t n, const std::vector<ItemSequence>& derivs, const ThetaStar& w)
{
    if (derivs.empty())
        throw CoverageError(n, "sentence " + std::to_string(n) + " has no derivation");

    SentenceWork out;
    std::vector<double> logs;
    logs.reserve(derivs.size());
    for (const auto& d : derivs) {
        double lw = 0.0;
        for (auto id : d) lw += w.log_rows.at(id.category).at(id.index);
        logs.push_back(lw);
    }
    const double log_z = log_sum_exp(logs);
    if (!std::isfinite(log_z))
        throw ModelError("sentence " + std::to_string(n) + " has a non-finite normalizer");
    out.posterior.log_normalizer = log_z;
    out.posterior.weights.reserve(logs.size());
    double mass = 0.0;
    for (double lw : logs) {
        out.posterior.weights.push_back(std::exp(lw - log_z));
        mass += out.posterior.weights.back();
    }
    for (double& q : out.posterior.weights) q /= mass;

    std::map<ItemId, std::vector<double>> parts;
    for (std::size_t j = 0; j < derivs.size(); ++j) {
        std::map<ItemId, std::size_t> occurrences;
        for (auto id : derivs[j]) ++occurrences[id];
        for (auto [id, c] : occurrences)
            parts[id].push_back(out.posterior.weights[j] * static_cast<double>(c));
    }
    // Summing each item's contributions in sorted order makes the total
    // independent of derivation order.
    for (auto& [id, v] : parts) {
        std::sort(v.begin(), v.end());
        double s = 0.0;
        for (double x : v) s += x;
        out.counts.emplace_back(id, s);
    }
    return out;
}

template <class T>
T zeros_like(const CategoryTable& shape)
{
    T t;
    for (const auto& row : shape.rows) t.rows.emplace_back(row.size(), 0.0);
    return t;
}

std::string describe(const Omega& omega)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t k = 0; k < omega.rows.size(); ++k) {
        os << (k ? "; " : "") << "k=" << k << ":";
        for (double v : omega.rows[k]) os << ' ' << v;
    }
    return os.str();
}

} // namespace

Omega omega_from_alpha(const Alpha& alpha)
{
    Omega o;
    o.rows = alpha.rows;
    return o;
}

ThetaStar theta_star(const Omega& omega)
{
    ThetaStar out;
    for (std::size_t k = 0; k < omega.rows.size(); ++k) {
        const auto& row = omega.rows[k];
        double total = 0.0;
        for (double v : row) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ModelError("omega entries must be positive and finite (category " + std::to_string(k) + ")");
            total += v;
        }
        const double psi_total = digamma(total);
        std::vector<double> logs;
        std::vector<double> weights;
        double mass = 0.0;
        for (double v : row) {
            const double l = row.size() == 1 ? 0.0 : digamma(v) - psi_total;
            logs.push_back(l);
            weights.push_back(std::exp(l));
            mass += weights.back();
        }
        if (mass > 1.0 || (row.size() >= 2 && !(mass < 1.0)))
            throw ModelError("theta* row " + std::to_string(k) + " is not sub-normalized (sum "
                             + std::to_string(mass) + ")");
        out.rows.push_back(std::move(weights));
        out.log_rows.push_back(std::move(logs));
    }
    return out;
}

EStepResult e_step(std::span<const std::vector<ItemSequence>> derivations, const ThetaStar& w, unsigned threads)
{
    const std::size_t n = derivations.size();
    std::vector<SentenceWork> work(n);
    std::vector<std::exception_ptr> errors(n);

    auto run = [&](std::size_t i) {
        try {
            work[i] = score_sentence(i, derivations[i], w);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) run(i);
            });
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    EStepResult out;
    out.counts = zeros_like<ExpectedCounts>(w);
    for (auto& s : work) {
        for (auto [id, c] : s.counts) out.counts[id] += c;
        out.posteriors.push_back(std::move(s.posterior));
    }
    return out;
}

Omega m_step(const Alpha& alpha, const ExpectedCounts& counts)
{
    if (!alpha.same_shape(counts)) throw ModelError("m_step: alpha and counts differ in shape");
    Omega o;
    o.rows = alpha.rows;
    for (std::size_t k = 0; k < o.rows.size(); ++k)
        for (std::size_t m = 0; m < o.rows[k].size(); ++m) o.rows[k][m] += counts.rows[k][m];
    return o;
}

double elbo_surrogate(const Omega& omega, const Alpha& alpha, std::span<const double> log_normalizers)
{
    if (!omega.same_shape(alpha)) throw ModelError("elbo_surrogate: omega and alpha differ in shape");
    double out = 0.0;
    for (double z : log_normalizers) out += z;
    for (std::size_t k = 0; k < omega.rows.size(); ++k)
        if (omega.rows[k].size() > 1) out -= dirichlet_kl(omega.rows[k], alpha.rows[k]);
    return out;
}

Theta posterior_mean(const Omega& omega)
{
    Theta t;
    for (const auto& row : omega.rows) {
        double total = 0.0;
        for (double v : row) total += v;
        std::vector<double> mean;
        for (double v : row) mean.push_back(v / total);
        t.rows.push_back(std::move(mean));
    }
    return t;
}

TrainState fit(const Lexicon& lex, std::span<const std::vector<ItemSequence>> derivations, const Alpha& alpha,
               const TrainConfig& cfg)
{
    if (!alpha.matches(lex)) throw ModelError("alpha does not match the lexicon");
    if (!(cfg.tol > 0.0)) throw InputError("tol must be positive");

    auto surrogate_of = [&](const Omega& omega, const EStepResult& es) {
        std::vector<double> log_z;
        for (const auto& p : es.posteriors) log_z.push_back(p.log_normalizer);
        const double s = elbo_surrogate(omega, alpha, log_z);
        if (!std::isfinite(s)) throw ModelError("non-finite ELBO surrogate at omega = " + describe(omega));
        return s;
    };

    TrainState state;
    state.omega = omega_from_alpha(alpha);
    auto es = e_step(derivations, theta_star(state.omega), cfg.threads);
    double current = surrogate_of(state.omega, es);
    state.elbo_trace.push_back(current);

    state.iterations = cfg.max_iters;
    for (std::size_t i = 0; i < cfg.max_iters; ++i) {
        auto omega = m_step(alpha, es.counts);
        auto next_es = e_step(derivations, theta_star(omega), cfg.threads);
        const double next = surrogate_of(omega, next_es);
        state.elbo_trace.push_back(next);
        state.omega = std::move(omega);
        es = std::move(next_es);
        if (std::abs(next - current) < cfg.tol) {
            state.iterations = i;
            state.converged = true;
            break;
        }
        current = next;
    }
    state.theta_mean = posterior_mean(state.omega);
    state.posteriors = std::move(es.posteriors);
    return state;
}

TrainState train(const Corpus& corpus, const Lexicon& lex, const Alpha& alpha, const TrainConfig& cfg)
{
    if (corpus.sentences.empty()) throw InputError("training corpus is empty");
    const auto forests = parse_all(corpus.sentences, lex, cfg.parse, cfg.threads);

    std::vector<std::vector<ItemSequence>> derivations;
    std::vector<std::size_t> unparsed;
    for (std::size_t n = 0; n < forests.size(); ++n) {
        if (forests[n].count() == 0) {
            if (!cfg.skip_unparsed)
                throw CoverageError(n, "sentence " + std::to_string(n + 1) + " (\""
                                           + detokenize(corpus.sentences[n]) + "\") has no derivation");
            unparsed.push_back(n);
            continue;
        }
        derivations.push_back(forests[n].sequences);
    }
    if (derivations.empty()) throw CoverageError(0, "no sentence in the corpus has a derivation");

    auto state = fit(lex, derivations, alpha, cfg);
    state.unparsed = std::move(unparsed);
    return state;
}

} // namespace pdmg
