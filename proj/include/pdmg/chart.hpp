#ifndef PDMG_CHART_HPP
#define PDMG_CHART_HPP

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pdmg/lexicon.hpp"
#include "pdmg/structure.hpp"

namespace pdmg {

/// Half-open token interval [start, end). Empty spans come from covert items.
struct Span
{
    std::size_t start = 0;
    std::size_t end = 0;

    bool empty() const noexcept { return start == end; }
    friend auto operator<=>(const Span&, const Span&) = default;
};

/// Non-empty spans that share a token.
inline bool overlaps(Span a, Span b) noexcept
{
    return !a.empty() && !b.empty() && a.start < b.end && b.start < a.end;
}

struct SpanChain
{
    Span span;
    FeatureSeq suffix;

    friend auto operator<=>(const SpanChain&, const SpanChain&) = default;
};

/// Span-valued counterpart of Expression. Movers are kept sorted by their
/// leading licensee so that equivalent items compare equal.
struct ChartItem
{
    SpanChain head;
    std::vector<SpanChain> movers;

    friend auto operator<=>(const ChartItem&, const ChartItem&) = default;
};

struct BackPointer
{
    enum class Kind
    {
        Axiom,
        Binary,
        Unary
    };

    Kind kind = Kind::Axiom;
    RuleKind rule{};       // Binary / Unary
    std::size_t first = 0; // selecting item (Binary) or the moved item (Unary)
    std::size_t second = 0; // selected item (Binary)
    ItemId leaf{};         // Axiom
    bool covert = false;   // Axiom
};

struct ParseConfig
{
    std::string start_category = "c";
    std::size_t max_derivations = 10000;
    std::size_t max_eval_steps = 5'000'000;
    std::size_t max_covert = 3;
};

struct DerivationForest
{
    std::vector<std::string> tokens;
    ParseConfig config;
    std::vector<ChartItem> items;
    std::vector<std::vector<BackPointer>> backpointers; // parallel to items
    std::vector<std::size_t> goals;
    std::vector<ItemSequence> sequences; // extracted derivations, sorted
    std::size_t steps = 0;               // deduction work spent on the closure

    std::size_t count() const noexcept { return sequences.size(); }
};

/// Exhaustive agenda-driven closure of the merge/move rules over spans,
/// followed by extraction. Throws CapExceeded when the closure needs more
/// than max_eval_steps or the derivation count passes max_derivations, and
/// InputError for an unknown start category.
DerivationForest parse(std::span<const std::string> tokens, const Lexicon& lex,
                       const ParseConfig& cfg);

/// One sequence per distinct derivation of the goal items with at most
/// config.max_covert covert leaves, in lexicographic order of leaf ids.
std::vector<ItemSequence> extract_sequences(const DerivationForest& forest);

/// Parses every sentence; results come back in input order whatever the
/// thread count. The first failure (lowest sentence index) is rethrown.
std::vector<DerivationForest> parse_all(std::span<const std::vector<std::string>> sentences,
                                        const Lexicon& lex, const ParseConfig& cfg,
                                        unsigned threads = 1);

} // namespace pdmg

#endif
