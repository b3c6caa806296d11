#include "pdmg/feature.hpp"

#include "pdmg/errors.hpp"

namespace pdmg {

bool is_valid_feature_name(std::string_view name) noexcept
{
    if (name.empty() || name.front() < 'a' || name.front() > 'z') return false;
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

Feature parse_feature(std::string_view token)
{
    Feature f{FeatureKind::Category, {}};
    std::string_view name = token;
    if (token.size() >= 2 && token.front() == '=') {
        f.kind = FeatureKind::SelectRight;
        name = token.substr(1);
    } else if (token.size() >= 2 && token.back() == '=') {
        f.kind = FeatureKind::SelectLeft;
        name = token.substr(0, token.size() - 1);
    } else if (token.size() >= 2 && token.front() == '+') {
        f.kind = FeatureKind::Licensor;
        name = token.substr(1);
    } else if (token.size() >= 2 && token.front() == '-') {
        f.kind = FeatureKind::Licensee;
        name = token.substr(1);
    }
    if (!is_valid_feature_name(name))
        throw InputError("malformed feature token '" + std::string(token) + "'");
    f.name = std::string(name);
    return f;
}

std::string to_string(const Feature& f)
{
    switch (f.kind) {
        case FeatureKind::Category:    return f.name;
        case FeatureKind::SelectRight: return "=" + f.name;
        case FeatureKind::SelectLeft:  return f.name + "=";
        case FeatureKind::Licensor:    return "+" + f.name;
        case FeatureKind::Licensee:    return "-" + f.name;
    }
    return f.name;
}

std::string to_string(const FeatureSeq& seq)
{
    std::string out;
    for (const auto& f : seq) {
        if (!out.empty()) out += ' ';
        out += to_string(f);
    }
    return out;
}

std::string feature_order_violation(const FeatureSeq& seq)
{
    // 0: selectors, 1: licensors, 2: after category
    int phase = 0;
    std::size_t categories = 0;
    for (const auto& f : seq) {
        switch (f.kind) {
            case FeatureKind::SelectRight:
            case FeatureKind::SelectLeft:
                if (phase != 0) return "selector '" + to_string(f) + "' out of order";
                break;
            case FeatureKind::Licensor:
                if (phase > 1) return "licensor '" + to_string(f) + "' after the category";
                phase = 1;
                break;
            case FeatureKind::Category:
                if (++categories > 1) return "more than one category feature";
                phase = 2;
                break;
            case FeatureKind::Licensee:
                if (phase != 2) return "licensee '" + to_string(f) + "' before the category";
                break;
        }
    }
    if (categories == 0) return "no category feature";
    return {};
}

std::size_t category_position(const FeatureSeq& seq)
{
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (seq[i].kind == FeatureKind::Category) return i;
    throw ModelError("feature sequence has no category: '" + to_string(seq) + "'");
}

} // namespace pdmg
