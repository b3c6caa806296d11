#include "pdmg/wellformed.hpp"

#include <stdexcept>

namespace pdmg {

std::string_view to_string(CursorAction a) noexcept
{
    switch (a) {
        case CursorAction::MoveRight:          return "move-right";
        case CursorAction::DeleteRootCategory: return "delete-root-category";
        case CursorAction::MatchCategory:      return "match-category";
        case CursorAction::MoveLeft:           return "move-left";
        case CursorAction::CheckLicensor:      return "check-licensor";
        case CursorAction::DeleteItem:         return "delete-item";
        case CursorAction::Accept:             return "accept";
        case CursorAction::Reject:             return "reject";
    }
    return "?";
}

namespace {

constexpr std::size_t npos = CursorStep::none;

// Working copy of the sequence. Features are only ever deleted from the
// front of an item, so each slot is a cursor into its item's features;
// deleted slots are unlinked from a doubly-linked list.
class Walker
{
public:
    Walker(const Lexicon& lex, std::span<const ItemId> seq, CursorTrace* trace)
        : trace_{trace}
    {
        slots_.reserve(seq.size());
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const auto& item = lex.item(seq[i]);
            Slot s;
            s.item = &item;
            s.category_at = category_position(item.features);
            s.prev = i == 0 ? npos : i - 1;
            s.next = i + 1 == seq.size() ? npos : i + 1;
            budget_ += 4 * (item.features.size() + 1);
            slots_.push_back(s);
        }
        alive_ = slots_.size();
        budget_ = 4 * budget_ * budget_ + 16;
    }

    bool run()
    {
        if (slots_.empty()) return reject(npos, "empty");
        std::size_t cur = 0;
        const std::size_t root = 0;
        for (std::size_t guard = 0;; ++guard) {
            if (guard > budget_) throw std::logic_error("well-formedness walk failed to terminate");
            if (alive_ == 0) {
                record(npos, CursorAction::Accept, "end");
                return true;
            }
            Slot& s = slots_[cur];
            if (s.exhausted()) {
                const auto left = s.prev;
                const auto right = s.next;
                unlink(cur);
                record(cur, CursorAction::DeleteItem, "5");
                cur = left != npos ? left : right;
                continue;
            }
            const Feature& f = s.front();
            switch (f.kind) {
                case FeatureKind::SelectRight:
                case FeatureKind::SelectLeft: {
                    auto r = s.next;
                    while (r != npos && slots_[r].licensees_only()) r = slots_[r].next;
                    if (r == npos) return reject(cur, "1");
                    record(cur, CursorAction::MoveRight, "1");
                    cur = r;
                    break;
                }
                case FeatureKind::Category: {
                    if (cur == root) {
                        ++s.pos;
                        record(cur, CursorAction::DeleteRootCategory, "2a");
                        break;
                    }
                    auto l = s.prev;
                    while (l != npos && !slots_[l].has_category()) l = slots_[l].prev;
                    if (l == npos || !selects(slots_[l].front(), f)) return reject(cur, "2c");
                    ++s.pos;
                    ++slots_[l].pos;
                    record(cur, CursorAction::MatchCategory, "2b", l);
                    break;
                }
                case FeatureKind::Licensee: {
                    if (s.prev == npos) return reject(cur, "3");
                    record(cur, CursorAction::MoveLeft, "3");
                    cur = s.prev;
                    break;
                }
                case FeatureKind::Licensor: {
                    auto r = s.next;
                    bool intervening = false;
                    while (r != npos) {
                        const Slot& o = slots_[r];
                        if (!o.exhausted() && o.front().kind == FeatureKind::Licensee
                            && o.front().name == f.name)
                            break;
                        intervening = intervening || o.has_category();
                        r = o.next;
                    }
                    if (r == npos) return reject(cur, "4a");
                    if (intervening) return reject(cur, "4b");
                    ++s.pos;
                    ++slots_[r].pos;
                    record(cur, CursorAction::CheckLicensor, "4c", r);
                    break;
                }
            }
        }
    }

private:
    struct Slot
    {
        const LexicalItem* item = nullptr;
        std::size_t pos = 0;
        std::size_t category_at = 0;
        std::size_t prev = npos;
        std::size_t next = npos;
        bool alive = true;

        bool exhausted() const { return pos >= item->features.size(); }
        bool has_category() const { return pos <= category_at; }
        bool licensees_only() const { return !exhausted() && !has_category(); }
        const Feature& front() const { return item->features[pos]; }
    };

    void unlink(std::size_t i)
    {
        Slot& s = slots_[i];
        if (s.prev != npos) slots_[s.prev].next = s.next;
        if (s.next != npos) slots_[s.next].prev = s.prev;
        s.alive = false;
        --alive_;
    }

    bool reject(std::size_t at, const char* rule)
    {
        record(at, CursorAction::Reject, rule);
        return false;
    }

    void record(std::size_t at, CursorAction action, const char* rule, std::size_t partner = npos)
    {
        if (!trace_) return;
        CursorStep step;
        step.position = at;
        step.action = action;
        step.rule = rule;
        step.partner = partner;
        step.state = render();
        trace_->steps.push_back(std::move(step));
    }

    std::string render() const
    {
        std::string out = "⟨";
        bool first = true;
        for (const auto& s : slots_) {
            if (!s.alive) continue;
            if (!first) out += ", ";
            first = false;
            out += s.item->covert() ? std::string(covert_glyph) : s.item->phon;
            out += ':';
            for (std::size_t k = s.pos; k < s.item->features.size(); ++k) {
                if (k > s.pos) out += ' ';
                out += to_string(s.item->features[k]);
            }
        }
        return out + "⟩";
    }

    CursorTrace* trace_;
    std::vector<Slot> slots_;
    std::size_t alive_ = 0;
    std::size_t budget_ = 0;
};

} // namespace

bool is_wellformed(const Lexicon& lex, std::span<const ItemId> seq)
{
    return Walker(lex, seq, nullptr).run();
}

CursorTrace trace_wellformed(const Lexicon& lex, std::span<const ItemId> seq)
{
    CursorTrace trace;
    trace.verdict = Walker(lex, seq, &trace).run();
    return trace;
}

std::string format_trace(const CursorTrace& trace)
{
    std::string out;
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        out += std::to_string(i + 1) + ". [" + s.rule + "] " + std::string(to_string(s.action));
        if (s.position != CursorStep::none) out += " @" + std::to_string(s.position);
        if (s.partner != CursorStep::none) out += " with @" + std::to_string(s.partner);
        out += "  " + s.state + "\n";
    }
    out += trace.verdict ? "true\n" : "false\n";
    return out;
}

} // namespace pdmg
