#include "pdmg/chart.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include "pdmg/errors.hpp"

namespace pdmg {

namespace {

FeatureSeq drop_front(const FeatureSeq& f)
{
    return FeatureSeq(f.begin() + 1, f.end());
}

void canonicalize(std::vector<SpanChain>& movers)
{
    std::sort(movers.begin(), movers.end(), [](const SpanChain& a, const SpanChain& b) {
        return a.suffix.front().name < b.suffix.front().name;
    });
}

bool smc_ok(const std::vector<SpanChain>& movers)
{
    for (std::size_t i = 1; i < movers.size(); ++i)
        if (movers[i - 1].suffix.front().name == movers[i].suffix.front().name) return false;
    return true;
}

template <typename F>
void for_each_span(const ChartItem& item, F&& f)
{
    f(item.head.span);
    for (const auto& m : item.movers) f(m.span);
}

bool disjoint(const ChartItem& a, const ChartItem& b)
{
    bool ok = true;
    for_each_span(a, [&](Span x) { for_each_span(b, [&](Span y) { ok = ok && !overlaps(x, y); }); });
    return ok;
}

// s leads with a selector for t's leading category.
std::optional<ChartItem> combine(const ChartItem& s, const ChartItem& t, RuleKind& rule)
{
    if (!disjoint(s, t)) return std::nullopt;
    const Feature& sel = s.head.suffix.front();
    ChartItem out;
    out.movers = s.movers;
    out.movers.insert(out.movers.end(), t.movers.begin(), t.movers.end());
    out.head.suffix = drop_front(s.head.suffix);
    if (t.head.suffix.size() == 1) {
        if (sel.kind == FeatureKind::SelectLeft) {
            if (t.head.span.end != s.head.span.start) return std::nullopt;
            out.head.span = Span{t.head.span.start, s.head.span.end};
            rule = RuleKind::MergeLeft;
        } else {
            if (s.head.span.end != t.head.span.start) return std::nullopt;
            out.head.span = Span{s.head.span.start, t.head.span.end};
            rule = RuleKind::MergeRight;
        }
    } else {
        out.head.span = s.head.span;
        out.movers.push_back(SpanChain{t.head.span, drop_front(t.head.suffix)});
        rule = RuleKind::MergeMover;
    }
    canonicalize(out.movers);
    if (!smc_ok(out.movers)) return std::nullopt;
    return out;
}

std::optional<ChartItem> apply_move(const ChartItem& s, RuleKind& rule)
{
    const auto& y = s.head.suffix.front().name;
    auto it = std::find_if(s.movers.begin(), s.movers.end(),
                           [&](const SpanChain& m) { return m.suffix.front().name == y; });
    if (it == s.movers.end()) return std::nullopt;
    ChartItem out;
    out.head.suffix = drop_front(s.head.suffix);
    out.movers = s.movers;
    auto& mover = out.movers[static_cast<std::size_t>(it - s.movers.begin())];
    if (mover.suffix.size() == 1) {
        if (mover.span.end != s.head.span.start) return std::nullopt;
        out.head.span = Span{mover.span.start, s.head.span.end};
        out.movers.erase(out.movers.begin() + (it - s.movers.begin()));
        rule = RuleKind::MoveFinal;
    } else {
        out.head.span = s.head.span;
        mover.suffix = drop_front(mover.suffix);
        canonicalize(out.movers);
        if (!smc_ok(out.movers)) return std::nullopt;
        rule = RuleKind::MoveAgain;
    }
    return out;
}

class Closure
{
public:
    Closure(DerivationForest& forest) : forest_{forest} {}

    void add(ChartItem item, BackPointer bp)
    {
        auto [it, fresh] = index_.try_emplace(item, forest_.items.size());
        if (fresh) {
            forest_.items.push_back(std::move(item));
            forest_.backpointers.emplace_back();
            agenda_.push_back(it->second);
        }
        forest_.backpointers[it->second].push_back(bp);
    }

    void run()
    {
        while (!agenda_.empty()) {
            const auto idx = agenda_.front();
            agenda_.pop_front();
            tick();
            const ChartItem item = forest_.items[idx];
            const Feature& lead = item.head.suffix.front();
            RuleKind rule{};
            if (is_selector(lead)) {
                wants_[lead.name].push_back(idx);
                const auto partners = has_[lead.name];
                for (auto other : partners) {
                    tick();
                    if (auto c = combine(item, forest_.items[other], rule))
                        add(std::move(*c), binary(rule, idx, other));
                }
            } else if (lead.kind == FeatureKind::Category) {
                has_[lead.name].push_back(idx);
                const auto partners = wants_[lead.name];
                for (auto other : partners) {
                    tick();
                    if (auto c = combine(forest_.items[other], item, rule))
                        add(std::move(*c), binary(rule, other, idx));
                }
            } else if (lead.kind == FeatureKind::Licensor) {
                if (auto c = apply_move(item, rule)) {
                    BackPointer bp;
                    bp.kind = BackPointer::Kind::Unary;
                    bp.rule = rule;
                    bp.first = idx;
                    add(std::move(*c), bp);
                }
            }
        }
    }

private:
    static BackPointer binary(RuleKind rule, std::size_t s, std::size_t t)
    {
        BackPointer bp;
        bp.kind = BackPointer::Kind::Binary;
        bp.rule = rule;
        bp.first = s;
        bp.second = t;
        return bp;
    }

    void tick()
    {
        if (++forest_.steps > forest_.config.max_eval_steps)
            throw CapExceeded("chart closure exceeded max_eval_steps ("
                              + std::to_string(forest_.config.max_eval_steps) + ")");
    }

    DerivationForest& forest_;
    std::map<ChartItem, std::size_t> index_;
    std::deque<std::size_t> agenda_;
    std::map<std::string, std::vector<std::size_t>> wants_; // lead with a selector for x
    std::map<std::string, std::vector<std::size_t>> has_;   // lead with category x
};

constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max() / 4;

struct Partial
{
    ItemSequence leaves;
    std::size_t covert = 0;
};

// Enumerates derivations under a covert-leaf budget. Every cycle in the
// back-pointer graph passes through a binary step whose other antecedent
// spans nothing and therefore costs at least one covert leaf, so budgets
// strictly shrink around cycles.
class Extractor
{
public:
    explicit Extractor(const DerivationForest& forest) : forest_{forest}
    {
        min_covert_.assign(forest.items.size(), unreachable);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < forest.items.size(); ++i) {
                for (const auto& bp : forest.backpointers[i]) {
                    const auto c = cost(bp);
                    if (c < min_covert_[i]) {
                        min_covert_[i] = c;
                        changed = true;
                    }
                }
            }
        }
    }

    const std::vector<Partial>& derivations(std::size_t item, std::size_t budget)
    {
        const auto key = std::make_pair(item, budget);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (!active_.insert(key).second)
            throw std::logic_error("derivation extraction revisited an item without progress");

        std::vector<Partial> out;
        if (min_covert_[item] <= budget) {
            for (const auto& bp : forest_.backpointers[item]) {
                switch (bp.kind) {
                    case BackPointer::Kind::Axiom:
                        if ((bp.covert ? 1u : 0u) <= budget)
                            out.push_back(Partial{{bp.leaf}, bp.covert ? 1u : 0u});
                        break;
                    case BackPointer::Kind::Unary: {
                        const auto& inner = derivations(bp.first, budget);
                        out.insert(out.end(), inner.begin(), inner.end());
                        break;
                    }
                    case BackPointer::Kind::Binary: {
                        const auto reserve = min_covert_[bp.second];
                        if (reserve > budget) break;
                        const auto& heads = derivations(bp.first, budget - reserve);
                        for (const auto& h : heads) {
                            const auto& args = derivations(bp.second, budget - h.covert);
                            for (const auto& a : args) {
                                Partial p{h.leaves, h.covert + a.covert};
                                p.leaves.insert(p.leaves.end(), a.leaves.begin(), a.leaves.end());
                                out.push_back(std::move(p));
                            }
                            check(out.size());
                        }
                        break;
                    }
                }
                check(out.size());
            }
        }
        active_.erase(key);
        return memo_.emplace(key, std::move(out)).first->second;
    }

private:
    std::size_t cost(const BackPointer& bp) const
    {
        switch (bp.kind) {
            case BackPointer::Kind::Axiom:  return bp.covert ? 1 : 0;
            case BackPointer::Kind::Unary:  return min_covert_[bp.first];
            case BackPointer::Kind::Binary: return std::min(unreachable, min_covert_[bp.first] + min_covert_[bp.second]);
        }
        return unreachable;
    }

    void check(std::size_t n) const
    {
        if (n > forest_.config.max_derivations)
            throw CapExceeded("more than " + std::to_string(forest_.config.max_derivations)
                              + " derivations");
    }

    const DerivationForest& forest_;
    std::vector<std::size_t> min_covert_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Partial>> memo_;
    std::set<std::pair<std::size_t, std::size_t>> active_;
};

} // namespace

DerivationForest parse(std::span<const std::string> tokens, const Lexicon& lex, const ParseConfig& cfg)
{
    if (!lex.category_index(cfg.start_category))
        throw InputError("unknown start category '" + cfg.start_category + "'");
    if (cfg.max_derivations < 1 || cfg.max_eval_steps < 1)
        throw InputError("parse caps must be at least 1");

    DerivationForest forest;
    forest.tokens.assign(tokens.begin(), tokens.end());
    forest.config = cfg;
    const std::size_t n = tokens.size();

    Closure closure(forest);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto id : lex.lookup(tokens[i])) {
            if (lex.item(id).covert()) continue;
            BackPointer bp;
            bp.leaf = id;
            closure.add(ChartItem{SpanChain{Span{i, i + 1}, lex.item(id).features}, {}}, bp);
        }
    }
    for (auto id : lex.covert_items()) {
        for (std::size_t p = 0; p <= n; ++p) {
            BackPointer bp;
            bp.leaf = id;
            bp.covert = true;
            closure.add(ChartItem{SpanChain{Span{p, p}, lex.item(id).features}, {}}, bp);
        }
    }
    closure.run();

    const ChartItem goal{SpanChain{Span{0, n}, {Feature{FeatureKind::Category, cfg.start_category}}}, {}};
    for (std::size_t i = 0; i < forest.items.size(); ++i)
        if (forest.items[i] == goal) forest.goals.push_back(i);

    forest.sequences = extract_sequences(forest);
    return forest;
}

std::vector<ItemSequence> extract_sequences(const DerivationForest& forest)
{
    std::vector<ItemSequence> out;
    if (forest.goals.empty()) return out;
    Extractor ex(forest);
    for (auto g : forest.goals)
        for (const auto& d : ex.derivations(g, forest.config.max_covert)) out.push_back(d.leaves);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > forest.config.max_derivations)
        throw CapExceeded("more than " + std::to_string(forest.config.max_derivations) + " derivations");
    return out;
}

std::vector<DerivationForest> parse_all(std::span<const std::vector<std::string>> sentences,
                                        const Lexicon& lex, const ParseConfig& cfg, unsigned threads)
{
    std::vector<DerivationForest> out(sentences.size());
    std::vector<std::exception_ptr> errors(sentences.size());
    auto work = [&](std::size_t i) {
        try {
            out[i] = parse(sentences[i], lex, cfg);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (threads <= 1 || sentences.size() < 2) {
        for (std::size_t i = 0; i < sentences.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        const auto n = std::min<std::size_t>(threads, sentences.size());
        for (std::size_t t = 0; t < n; ++t)
            pool.emplace_back([&] {
                for (auto i = next++; i < sentences.size(); i = next++) work(i);
            });
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace pdmg
