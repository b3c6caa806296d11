#include "pdmg/structure.hpp"

#include <algorithm>

namespace pdmg {

std::string_view to_string(RuleKind r) noexcept
{
    switch (r) {
        case RuleKind::MergeLeft:  return "merge-L";
        case RuleKind::MergeRight: return "merge-R";
        case RuleKind::MergeMover: return "merge-m";
        case RuleKind::MoveFinal:  return "move-1";
        case RuleKind::MoveAgain:  return "move-2";
    }
    return "?";
}

std::string join_words(std::string_view left, std::string_view right)
{
    if (left.empty()) return std::string(right);
    if (right.empty()) return std::string(left);
    std::string out;
    out.reserve(left.size() + right.size() + 1);
    out.append(left).append(" ").append(right);
    return out;
}

Expression lexical_expression(const LexicalItem& item)
{
    return Expression{Chain{item.phon, item.features}, {}};
}

void check_smc(const std::vector<Chain>& movers)
{
    for (std::size_t i = 0; i < movers.size(); ++i) {
        const auto& a = movers[i].suffix;
        if (a.empty() || a.front().kind != FeatureKind::Licensee)
            throw DerivationError(DerivationFailure::Precondition,
                                  "mover '" + movers[i].yield + "' does not lead with a licensee");
        for (std::size_t j = i + 1; j < movers.size(); ++j) {
            if (movers[j].suffix.front().name == a.front().name)
                throw DerivationError(DerivationFailure::SmcViolation,
                                      "two movers waiting on -" + a.front().name);
        }
    }
}

namespace {

FeatureSeq tail(const FeatureSeq& f, std::size_t from = 1)
{
    return FeatureSeq(f.begin() + static_cast<std::ptrdiff_t>(from), f.end());
}

// Shared precondition of the three merge rules; returns the selector.
const Feature& check_selection(const Expression& s, const Expression& t)
{
    if (s.head.suffix.empty() || !is_selector(s.head.suffix.front()))
        throw DerivationError(DerivationFailure::Precondition,
                              "selecting head '" + s.head.yield + "' has no leading selector");
    if (t.head.suffix.empty() || t.head.suffix.front().kind != FeatureKind::Category)
        throw DerivationError(DerivationFailure::FeatureMismatch,
                              "argument '" + t.head.yield + "' does not lead with a category");
    const Feature& sel = s.head.suffix.front();
    if (!selects(sel, t.head.suffix.front()))
        throw DerivationError(DerivationFailure::FeatureMismatch,
                              to_string(sel) + " cannot select " + to_string(t.head.suffix.front()));
    return sel;
}

Expression merge_in_place(const Expression& s, const Expression& t, FeatureKind direction)
{
    const Feature& sel = check_selection(s, t);
    if (sel.kind != direction)
        throw DerivationError(DerivationFailure::Precondition,
                              to_string(sel) + " selects in the other direction");
    if (t.head.suffix.size() != 1)
        throw DerivationError(DerivationFailure::Precondition,
                              "argument '" + t.head.yield + "' still has licensees (use merge-m)");
    Expression out;
    out.head.suffix = tail(s.head.suffix);
    if (direction == FeatureKind::SelectLeft) {
        out.head.yield = join_words(t.head.yield, s.head.yield);
        out.movers = t.movers;
        out.movers.insert(out.movers.end(), s.movers.begin(), s.movers.end());
    } else {
        out.head.yield = join_words(s.head.yield, t.head.yield);
        out.movers = s.movers;
        out.movers.insert(out.movers.end(), t.movers.begin(), t.movers.end());
    }
    check_smc(out.movers);
    return out;
}

// Index of the mover whose leading licensee matches the head's licensor.
std::size_t find_mover(const Expression& s)
{
    if (s.head.suffix.empty() || s.head.suffix.front().kind != FeatureKind::Licensor)
        throw DerivationError(DerivationFailure::Precondition,
                              "head '" + s.head.yield + "' has no leading licensor");
    const auto& y = s.head.suffix.front().name;
    for (std::size_t i = 0; i < s.movers.size(); ++i) {
        const auto& m = s.movers[i].suffix;
        if (!m.empty() && m.front().kind == FeatureKind::Licensee && m.front().name == y) return i;
    }
    throw DerivationError(DerivationFailure::NoMatchingMover, "no mover carries -" + y);
}

} // namespace

Expression merge_left(const Expression& s, const Expression& t)
{
    return merge_in_place(s, t, FeatureKind::SelectLeft);
}

Expression merge_right(const Expression& s, const Expression& t)
{
    return merge_in_place(s, t, FeatureKind::SelectRight);
}

Expression merge_mover(const Expression& s, const Expression& t)
{
    check_selection(s, t);
    if (t.head.suffix.size() < 2)
        throw DerivationError(DerivationFailure::Precondition,
                              "argument '" + t.head.yield + "' has no licensees (use merge-L/R)");
    Expression out;
    out.head = Chain{s.head.yield, tail(s.head.suffix)};
    out.movers = s.movers;
    out.movers.push_back(Chain{t.head.yield, tail(t.head.suffix)});
    out.movers.insert(out.movers.end(), t.movers.begin(), t.movers.end());
    check_smc(out.movers);
    return out;
}

Expression move_final(const Expression& s)
{
    const auto i = find_mover(s);
    if (s.movers[i].suffix.size() != 1)
        throw DerivationError(DerivationFailure::Precondition,
                              "mover '" + s.movers[i].yield + "' moves again (use move-2)");
    Expression out;
    out.head = Chain{join_words(s.movers[i].yield, s.head.yield), tail(s.head.suffix)};
    out.movers = s.movers;
    out.movers.erase(out.movers.begin() + static_cast<std::ptrdiff_t>(i));
    return out;
}

Expression move_again(const Expression& s)
{
    const auto i = find_mover(s);
    if (s.movers[i].suffix.size() < 2)
        throw DerivationError(DerivationFailure::Precondition,
                              "mover '" + s.movers[i].yield + "' lands here (use move-1)");
    Expression out;
    out.head = Chain{s.head.yield, tail(s.head.suffix)};
    out.movers = s.movers;
    out.movers[i].suffix = tail(out.movers[i].suffix);
    check_smc(out.movers);
    return out;
}

Expression merge(const Expression& s, const Expression& t, RuleKind* used)
{
    check_selection(s, t);
    RuleKind rule = RuleKind::MergeMover;
    if (t.head.suffix.size() == 1)
        rule = s.head.suffix.front().kind == FeatureKind::SelectLeft ? RuleKind::MergeLeft
                                                                     : RuleKind::MergeRight;
    if (used) *used = rule;
    switch (rule) {
        case RuleKind::MergeLeft:  return merge_left(s, t);
        case RuleKind::MergeRight: return merge_right(s, t);
        default:                   return merge_mover(s, t);
    }
}

Expression move(const Expression& s, RuleKind* used)
{
    const auto i = find_mover(s);
    const bool lands = s.movers[i].suffix.size() == 1;
    if (used) *used = lands ? RuleKind::MoveFinal : RuleKind::MoveAgain;
    return lands ? move_final(s) : move_again(s);
}

std::size_t DerivationTree::count(Kind k) const
{
    std::size_t n = kind == k ? 1 : 0;
    for (const auto& c : children) n += c.count(k);
    return n;
}

namespace {

DerivationTree build(const Lexicon& lex, std::span<const ItemId> seq, std::size_t& pos)
{
    if (pos >= seq.size())
        throw DerivationError(DerivationFailure::ArityMismatch,
                              "sequence exhausted before every selector found an argument");
    const ItemId id = seq[pos++];
    DerivationTree node;
    node.leaf = id;
    for (const auto& f : lex.item(id).features) {
        if (is_selector(f)) {
            DerivationTree merged;
            merged.kind = DerivationTree::Kind::Merge;
            merged.children.push_back(std::move(node));
            merged.children.push_back(build(lex, seq, pos));
            node = std::move(merged);
        } else if (f.kind == FeatureKind::Licensor) {
            DerivationTree moved;
            moved.kind = DerivationTree::Kind::Move;
            moved.children.push_back(std::move(node));
            node = std::move(moved);
        }
    }
    return node;
}

void flatten(const DerivationTree& t, ItemSequence& out)
{
    if (t.kind == DerivationTree::Kind::Leaf) {
        out.push_back(t.leaf);
        return;
    }
    for (const auto& c : t.children) flatten(c, out);
}

void check_complete(const Expression& e)
{
    if (!e.movers.empty())
        throw DerivationError(DerivationFailure::Incomplete,
                              "unchecked licensee on mover '" + e.movers.front().yield + "'");
    if (e.head.suffix.size() != 1 || e.head.suffix.front().kind != FeatureKind::Category)
        throw DerivationError(DerivationFailure::Incomplete,
                              "root left with features '" + to_string(e.head.suffix) + "'");
}

std::string describe(const Expression& e)
{
    std::string feats = to_string(e.head.suffix);
    std::string words = e.head.yield;
    for (const auto& m : e.movers) {
        feats += ", " + to_string(m.suffix);
        words += "; " + m.yield;
    }
    return "{" + feats + "} " + words;
}

Expression render_node(const Lexicon& lex, const DerivationTree& t, int depth, std::string& out)
{
    const std::string indent(static_cast<std::size_t>(2 * depth), ' ');
    if (t.kind == DerivationTree::Kind::Leaf) {
        out += indent + "[" + lex.item(t.leaf).label() + "]";
        return lexical_expression(lex.item(t.leaf));
    }
    std::string inner;
    RuleKind rule{};
    Expression e;
    if (t.kind == DerivationTree::Kind::Merge) {
        auto s = render_node(lex, t.children[0], depth + 1, inner);
        inner += "\n";
        auto a = render_node(lex, t.children[1], depth + 1, inner);
        e = merge(s, a, &rule);
    } else {
        auto s = render_node(lex, t.children[0], depth + 1, inner);
        e = move(s, &rule);
    }
    out += indent + "[" + std::string(to_string(rule)) + " " + describe(e) + "\n" + inner + "]";
    return e;
}

} // namespace

DerivationTree seq_to_tree(const Lexicon& lex, std::span<const ItemId> seq)
{
    std::size_t pos = 0;
    auto tree = build(lex, seq, pos);
    if (pos != seq.size())
        throw DerivationError(DerivationFailure::ArityMismatch,
                              std::to_string(seq.size() - pos) + " item(s) left over");
    return tree;
}

ItemSequence tree_to_seq(const DerivationTree& tree)
{
    ItemSequence out;
    flatten(tree, out);
    return out;
}

Expression eval_tree(const Lexicon& lex, const DerivationTree& tree)
{
    switch (tree.kind) {
        case DerivationTree::Kind::Leaf:
            return lexical_expression(lex.item(tree.leaf));
        case DerivationTree::Kind::Merge:
            return merge(eval_tree(lex, tree.children[0]), eval_tree(lex, tree.children[1]));
        case DerivationTree::Kind::Move:
            return move(eval_tree(lex, tree.children[0]));
    }
    return {};
}

std::string eval_sequence(const Lexicon& lex, std::span<const ItemId> seq)
{
    const auto e = eval_tree(lex, seq_to_tree(lex, seq));
    check_complete(e);
    return e.head.yield;
}

std::optional<std::string> try_eval_sequence(const Lexicon& lex, std::span<const ItemId> seq)
{
    try {
        return eval_sequence(lex, seq);
    } catch (const DerivationError&) {
        return std::nullopt;
    }
}

std::string render_tree(const Lexicon& lex, const DerivationTree& tree)
{
    std::string out;
    render_node(lex, tree, 0, out);
    return out;
}

} // namespace pdmg
