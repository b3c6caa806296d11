#include "pdmg/corpus.hpp"

#include <fstream>
#include <sstream>

#include "pdmg/errors.hpp"

namespace pdmg {

std::vector<std::string> tokenize(std::string_view line)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    for (std::string tok; in >> tok;) out.push_back(std::move(tok));
    return out;
}

std::string detokenize(std::span<const std::string> tokens)
{
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

Corpus Corpus::from_text(std::string_view text)
{
    Corpus c;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
        auto tokens = tokenize(line);
        if (!tokens.empty()) c.sentences.push_back(std::move(tokens));
    }
    return c;
}

Corpus Corpus::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read corpus " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    auto c = from_text(buf.str());
    c.source = path;
    return c;
}

} // namespace pdmg
