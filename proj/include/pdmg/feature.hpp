#ifndef PDMG_FEATURE_HPP
#define PDMG_FEATURE_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pdmg {

enum class FeatureKind : std::uint8_t
{
    Category,    // x
    SelectRight, // =x
    SelectLeft,  // x=
    Licensor,    // +y
    Licensee     // -y
};

struct Feature
{
    FeatureKind kind;
    std::string name;

    friend auto operator<=>(const Feature&, const Feature&) = default;
};

using FeatureSeq = std::vector<Feature>;

inline bool is_selector(FeatureKind k) noexcept
{
    return k == FeatureKind::SelectRight || k == FeatureKind::SelectLeft;
}

inline bool is_selector(const Feature& f) noexcept { return is_selector(f.kind); }

/// True when `selector` is `=x` or `x=` and `category` is the bare `x`.
inline bool selects(const Feature& selector, const Feature& category) noexcept
{
    return is_selector(selector) && category.kind == FeatureKind::Category
        && selector.name == category.name;
}

/// Parses one surface token (`=x`, `x=`, `+y`, `-y` or `x`). Throws
/// InputError on anything else, including names outside `[a-z][a-z0-9_]*`.
Feature parse_feature(std::string_view token);

bool is_valid_feature_name(std::string_view name) noexcept;

std::string to_string(const Feature& f);
std::string to_string(const FeatureSeq& seq);

/// Checks the ordering (selector)* (licensor)* category (licensee)* and the
/// single-category constraint; returns an empty string on success and a
/// diagnostic otherwise.
std::string feature_order_violation(const FeatureSeq& seq);

/// Index of the category feature of a valid sequence.
std::size_t category_position(const FeatureSeq& seq);

} // namespace pdmg

#endif
