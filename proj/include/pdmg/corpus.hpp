#ifndef PDMG_CORPUS_HPP
#define PDMG_CORPUS_HPP

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdmg {

/// Whitespace split.
std::vector<std::string> tokenize(std::string_view line);
std::string detokenize(std::span<const std::string> tokens);

/// One sentence per non-blank line.
struct Corpus
{
    std::vector<std::vector<std::string>> sentences;
    std::filesystem::path source;

    static Corpus from_text(std::string_view text);
    /// Throws InputError when the file cannot be read.
    static Corpus load(const std::filesystem::path& path);
};

} // namespace pdmg

#endif
