#ifndef PDMG_STRUCTURE_HPP
#define PDMG_STRUCTURE_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdmg/errors.hpp"
#include "pdmg/lexicon.hpp"

namespace pdmg {

/// A word string paired with the features it still has to check.
struct Chain
{
    std::string yield;
    FeatureSeq suffix;

    friend bool operator==(const Chain&, const Chain&) = default;
};

/// Head chain plus the chains that are still waiting to move. Every mover's
/// suffix starts with a licensee, and no two movers share the same leading
/// licensee (shortest-move constraint).
struct Expression
{
    Chain head;
    std::vector<Chain> movers;

    friend bool operator==(const Expression&, const Expression&) = default;
};

enum class RuleKind
{
    MergeLeft,
    MergeRight,
    MergeMover,
    MoveFinal,
    MoveAgain
};

std::string_view to_string(RuleKind r) noexcept;

enum class DerivationFailure
{
    FeatureMismatch,
    SmcViolation,
    NoMatchingMover,
    Precondition,
    ArityMismatch,
    Incomplete
};

class DerivationError : public ModelError
{
public:
    DerivationError(DerivationFailure kind, const std::string& what) : ModelError(what), kind_{kind} {}

    DerivationFailure kind() const noexcept { return kind_; }

private:
    DerivationFailure kind_;
};

/// Joins two yields with one space; empty yields leave no trace.
std::string join_words(std::string_view left, std::string_view right);

Expression lexical_expression(const LexicalItem& item);

// [s : x= γ, λ...] [t : x, ι...]  ->  [t s : γ, ι..., λ...]
Expression merge_left(const Expression& s, const Expression& t);
// [s : =x γ, λ...] [t : x, ι...]  ->  [s t : γ, λ..., ι...]
Expression merge_right(const Expression& s, const Expression& t);
// [s : {=x|x=} γ, λ...] [t : x δ, ι...]  ->  [s : γ, λ..., t : δ, ι...]
Expression merge_mover(const Expression& s, const Expression& t);
// [s : +y γ, t : -y, λ...]  ->  [t s : γ, λ...]
Expression move_final(const Expression& s);
// [s : +y γ, t : -y δ, λ...]  ->  [s : γ, t : δ, λ...]
Expression move_again(const Expression& s);

/// Picks the applicable merge rule (or throws), optionally reporting it.
Expression merge(const Expression& s, const Expression& t, RuleKind* used = nullptr);
Expression move(const Expression& s, RuleKind* used = nullptr);

/// Throws DerivationError(SmcViolation) if two movers share a leading licensee.
void check_smc(const std::vector<Chain>& movers);

struct DerivationTree
{
    enum class Kind
    {
        Leaf,
        Merge,
        Move
    };

    Kind kind = Kind::Leaf;
    ItemId leaf{};                       // Leaf only
    std::vector<DerivationTree> children; // Merge: {projection, argument}; Move: {projection}

    std::size_t count(Kind k) const;

    friend bool operator==(const DerivationTree&, const DerivationTree&) = default;
};

/// Rebuilds the tree from its polish listing: each item is followed by one
/// argument subtree per selector feature, and a Move node is stacked on the
/// projection for each licensor. Throws DerivationError(ArityMismatch).
DerivationTree seq_to_tree(const Lexicon& lex, std::span<const ItemId> seq);
ItemSequence tree_to_seq(const DerivationTree& tree);

Expression eval_tree(const Lexicon& lex, const DerivationTree& tree);

/// Surface string of a complete derivation: every feature checked except
/// the root's category, and no movers left. Throws DerivationError.
std::string eval_sequence(const Lexicon& lex, std::span<const ItemId> seq);
std::optional<std::string> try_eval_sequence(const Lexicon& lex, std::span<const ItemId> seq);

/// Bracketed rendering; internal nodes show the rule, remaining features
/// and yields.
std::string render_tree(const Lexicon& lex, const DerivationTree& tree);

} // namespace pdmg

#endif
