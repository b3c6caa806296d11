#ifndef PDMG_WELLFORMED_HPP
#define PDMG_WELLFORMED_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdmg/lexicon.hpp"

namespace pdmg {

/*
 * Cursor-based well-formedness check for polish-notation item sequences.
 *
 * The cursor starts on the leftmost item (the root) and repeatedly applies
 * the first matching rule to the item under it:
 *
 *   1   leading selector      -> step right to the next item, skipping items
 *                                whose remaining features are all licensees
 *   2a  leading category, root -> delete it
 *   2b  leading category       -> the nearest item to the left that still has
 *                                a category must lead with the matching
 *                                selector; delete both
 *   2c                          otherwise ill-formed
 *   3   leading licensee       -> step left
 *   4   leading licensor +y    -> nearest item to the right whose leading
 *                                feature is -y; ill-formed if there is none
 *                                (4a) or an item with a category feature sits
 *                                in between (4b); else delete both (4c)
 *   5   no features left       -> delete the item, step left (or right when
 *                                nothing is left of it)
 *
 * The sequence is well-formed iff every item ends up deleted.
 */

enum class CursorAction
{
    MoveRight,
    DeleteRootCategory,
    MatchCategory,
    MoveLeft,
    CheckLicensor,
    DeleteItem,
    Accept,
    Reject
};

std::string_view to_string(CursorAction a) noexcept;

struct CursorStep
{
    static constexpr std::size_t none = static_cast<std::size_t>(-1);

    std::size_t position = none; // cursor item (index into the input) before the action
    CursorAction action = CursorAction::Reject;
    std::string rule;            // "1", "2a", "2b", "2c", "3", "4a", "4b", "4c", "5", "end"
    std::size_t partner = none;  // other item touched by 2b / 4c
    std::string state;           // working sequence after the action
};

struct CursorTrace
{
    std::vector<CursorStep> steps;
    bool verdict = false;
};

/// Never modifies `seq`. An empty sequence is not well-formed.
bool is_wellformed(const Lexicon& lex, std::span<const ItemId> seq);

CursorTrace trace_wellformed(const Lexicon& lex, std::span<const ItemId> seq);

std::string format_trace(const CursorTrace& trace);

} // namespace pdmg

#endif
