#ifndef PDMG_LEXICON_HPP
#define PDMG_LEXICON_HPP

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdmg/feature.hpp"

namespace pdmg {

/// (category index k, within-category index m), both 0-based. Written
/// `phon@k.m` on the command line and in JSON output.
struct ItemId
{
    std::size_t category = 0;
    std::size_t index = 0;

    friend auto operator<=>(const ItemId&, const ItemId&) = default;
};

/// Spelling used for covert (empty-phon) items when printing.
inline constexpr std::string_view covert_glyph = "ε";

struct LexicalItem
{
    std::string phon; // empty for covert items
    FeatureSeq features;
    ItemId id;

    bool covert() const noexcept { return phon.empty(); }

    /// `phon:f1 f2 ...`, with ε for covert items.
    std::string label() const;

    friend bool operator==(const LexicalItem&, const LexicalItem&) = default;
};

/// Depth-first (polish) listing of a derivation's leaves, root first.
using ItemSequence = std::vector<ItemId>;

/// An immutable, validated set of lexical items grouped by category. Items
/// keep file order within their category; categories are numbered in order
/// of first appearance.
class Lexicon
{
public:
    /// Parses the `phon :: f1 f2 ...` line format. Throws LexiconError.
    static Lexicon parse(std::string_view text);
    static Lexicon load(const std::filesystem::path& path);

    std::size_t size() const noexcept { return file_order_.size(); }
    std::size_t num_categories() const noexcept { return categories_.size(); }
    const std::vector<std::string>& categories() const noexcept { return categories_; }
    std::optional<std::size_t> category_index(std::string_view name) const;

    /// l_k for a category name; throws InputError for an unknown category.
    std::span<const LexicalItem> items_of_category(std::string_view name) const;
    std::span<const LexicalItem> items_of_category(std::size_t k) const { return by_category_.at(k); }

    std::vector<std::size_t> category_sizes() const;

    bool contains(ItemId id) const noexcept;
    /// Throws InputError for an id outside this lexicon.
    const LexicalItem& item(ItemId id) const;
    const LexicalItem& operator[](ItemId id) const { return item(id); }

    const std::vector<ItemId>& file_order() const noexcept { return file_order_; }

    /// Items whose phon equals `token` (exact, case-sensitive).
    std::vector<ItemId> lookup(std::string_view token) const;
    std::vector<ItemId> covert_items() const;

    /// `phon@k.m`; `ε@k.m` for covert items.
    std::string reference(ItemId id) const;
    /// Accepts `phon@k.m`, or a bare `phon` (or ε) naming exactly one item.
    ItemId resolve(std::string_view ref) const;
    /// Whitespace-separated references.
    ItemSequence resolve_sequence(std::string_view line) const;

    /// Canonical text form; parse(serialize()) reproduces this lexicon.
    std::string serialize() const;

    friend bool operator==(const Lexicon&, const Lexicon&) = default;

private:
    std::vector<std::string> categories_;
    std::vector<std::vector<LexicalItem>> by_category_;
    std::vector<ItemId> file_order_;
};

/// Renders a sequence as `⟨a:f, b:g⟩`-style text using item labels.
std::string format_sequence(const Lexicon& lex, std::span<const ItemId> seq);
/// Space-separated item references.
std::string format_references(const Lexicon& lex, std::span<const ItemId> seq);

} // namespace pdmg

#endif
