#include "pdmg/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "pdmg/errors.hpp"

namespace pdmg {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        const auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

bool parse_index(std::string_view s, std::size_t& out)
{
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

std::string LexicalItem::label() const
{
    std::string out = covert() ? std::string(covert_glyph) : phon;
    out += ':';
    out += to_string(features);
    return out;
}

Lexicon Lexicon::parse(std::string_view text)
{
    Lexicon lex;
    std::map<std::string, std::size_t, std::less<>> category_ids;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        auto line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto sep = line.find("::");
        if (sep == std::string_view::npos) throw LexiconError(line_no, "expected 'phon :: features'");

        auto phon = trim(line.substr(0, sep));
        if (phon == covert_glyph) phon = {};
        if (phon.find_first_of(" \t") != std::string_view::npos)
            throw LexiconError(line_no, "phon must be a single word");
        if (phon.find('@') != std::string_view::npos || phon.find("::") != std::string_view::npos)
            throw LexiconError(line_no, "phon may not contain '@' or '::'");

        LexicalItem item;
        item.phon = std::string(phon);
        for (auto tok : split_ws(line.substr(sep + 2))) {
            try {
                item.features.push_back(parse_feature(tok));
            } catch (const InputError& e) {
                throw LexiconError(line_no, e.what());
            }
        }
        if (auto problem = feature_order_violation(item.features); !problem.empty())
            throw LexiconError(line_no, problem);

        const auto& cat = item.features[category_position(item.features)].name;
        auto [it, fresh] = category_ids.try_emplace(cat, lex.categories_.size());
        if (fresh) {
            lex.categories_.push_back(cat);
            lex.by_category_.emplace_back();
        }
        auto& bucket = lex.by_category_[it->second];
        for (const auto& other : bucket) {
            if (other.phon == item.phon && other.features == item.features)
                throw LexiconError(line_no, "duplicate item '" + item.label() + "'");
        }
        item.id = ItemId{it->second, bucket.size()};
        lex.file_order_.push_back(item.id);
        bucket.push_back(std::move(item));
    }
    if (lex.file_order_.empty()) throw LexiconError(line_no, "lexicon has no items");
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open lexicon '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::optional<std::size_t> Lexicon::category_index(std::string_view name) const
{
    for (std::size_t k = 0; k < categories_.size(); ++k)
        if (categories_[k] == name) return k;
    return std::nullopt;
}

std::span<const LexicalItem> Lexicon::items_of_category(std::string_view name) const
{
    const auto k = category_index(name);
    if (!k) throw InputError("unknown category '" + std::string(name) + "'");
    return by_category_[*k];
}

std::vector<std::size_t> Lexicon::category_sizes() const
{
    std::vector<std::size_t> sizes;
    sizes.reserve(by_category_.size());
    for (const auto& b : by_category_) sizes.push_back(b.size());
    return sizes;
}

bool Lexicon::contains(ItemId id) const noexcept
{
    return id.category < by_category_.size() && id.index < by_category_[id.category].size();
}

const LexicalItem& Lexicon::item(ItemId id) const
{
    if (!contains(id))
        throw InputError("item " + std::to_string(id.category) + "." + std::to_string(id.index)
                         + " is not in the lexicon");
    return by_category_[id.category][id.index];
}

std::vector<ItemId> Lexicon::lookup(std::string_view token) const
{
    std::vector<ItemId> out;
    for (auto id : file_order_)
        if (item(id).phon == token) out.push_back(id);
    return out;
}

std::vector<ItemId> Lexicon::covert_items() const { return lookup(""); }

std::string Lexicon::reference(ItemId id) const
{
    const auto& it = item(id);
    return (it.covert() ? std::string(covert_glyph) : it.phon) + "@" + std::to_string(id.category)
         + "." + std::to_string(id.index);
}

ItemId Lexicon::resolve(std::string_view ref) const
{
    std::string_view phon = ref;
    const auto at = ref.rfind('@');
    if (at != std::string_view::npos) {
        phon = ref.substr(0, at);
        const auto rest = ref.substr(at + 1);
        const auto dot = rest.find('.');
        ItemId id;
        if (dot == std::string_view::npos || !parse_index(rest.substr(0, dot), id.category)
            || !parse_index(rest.substr(dot + 1), id.index))
            throw InputError("malformed item reference '" + std::string(ref) + "'");
        if (!contains(id)) throw InputError("no item " + std::string(ref));
        const auto& expected = item(id).phon;
        if (phon != expected && !(expected.empty() && (phon.empty() || phon == covert_glyph)))
            throw InputError("item reference '" + std::string(ref) + "' does not match phon '"
                             + expected + "'");
        return id;
    }
    if (phon == covert_glyph) phon = {};
    const auto hits = lookup(phon);
    if (hits.empty()) throw InputError("no item with phon '" + std::string(ref) + "'");
    if (hits.size() > 1)
        throw InputError("ambiguous item reference '" + std::string(ref) + "'; use phon@k.m");
    return hits.front();
}

ItemSequence Lexicon::resolve_sequence(std::string_view line) const
{
    ItemSequence seq;
    for (auto tok : split_ws(line)) seq.push_back(resolve(tok));
    return seq;
}

std::string Lexicon::serialize() const
{
    std::string out;
    for (auto id : file_order_) {
        const auto& it = item(id);
        out += it.phon;
        out += it.phon.empty() ? ":: " : " :: ";
        out += to_string(it.features);
        out += '\n';
    }
    return out;
}

std::string format_sequence(const Lexicon& lex, std::span<const ItemId> seq)
{
    std::string out = "⟨";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i) out += ", ";
        out += lex.item(seq[i]).label();
    }
    return out + "⟩";
}

std::string format_references(const Lexicon& lex, std::span<const ItemId> seq)
{
    std::string out;
    for (auto id : seq) {
        if (!out.empty()) out += ' ';
        out += lex.reference(id);
    }
    return out;
}

} // namespace pdmg
