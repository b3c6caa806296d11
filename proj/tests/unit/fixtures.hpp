#ifndef PDMG_TEST_FIXTURES_HPP
#define PDMG_TEST_FIXTURES_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "pdmg/lexicon.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(PDMG_TEST_DATA) + "/" + name; }

inline std::string text(const std::string& name)
{
    std::ifstream in(path(name));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline pdmg::Lexicon lexicon(const std::string& name) { return pdmg::Lexicon::load(path(name)); }
inline oracle::Lex oracle_lexicon(const std::string& name) { return oracle::read_lexicon(text(name)); }

// ⟨ε:=i +wh c, did:=v i, see:d= =d v, you:d, what:d -wh⟩
inline pdmg::ItemSequence fig1_sequence(const pdmg::Lexicon& lex)
{
    return lex.resolve_sequence("ε did see you what");
}

inline oracle::Seq to_oracle(const pdmg::ItemSequence& seq)
{
    oracle::Seq out;
    for (auto id : seq) out.emplace_back(id.category, id.index);
    return out;
}

inline pdmg::ItemSequence from_oracle(const oracle::Seq& seq)
{
    pdmg::ItemSequence out;
    for (auto [k, m] : seq) out.push_back({k, m});
    return out;
}

} // namespace fixtures

#endif
