#pragma once

#include <wkgram/wkgram.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

namespace testing_support {

using namespace wkgram;

inline Grammar grammar(std::string_view text) { return parse_grammar(text); }

/// "S [a/a] A" -> letters, resolving names against g.
inline std::vector<Letter> letters(const Grammar& g, std::string_view text)
{
    std::vector<Letter> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok.front() == '[') {
            auto slash = tok.find('/');
            out.emplace_back(DsString{tok.substr(1, slash - 1), tok.substr(slash + 1, tok.size() - slash - 2)});
        } else {
            auto nt = g.find(tok);
            if (!nt) throw std::invalid_argument("unknown non-terminal " + tok);
            out.emplace_back(*nt);
        }
    }
    return out;
}

inline WkWord word(const Grammar& g, std::string_view text)
{
    auto ls = letters(g, text);
    return canonicalize(std::span<const Letter>(ls), g);
}

inline std::vector<std::string> all_strings(std::string_view alpha, std::size_t max_len)
{
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (std::size_t l = 1; l <= max_len; ++l) {
        std::vector<std::string> next;
        for (const auto& s : layer)
            for (char c : alpha) next.push_back(s + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracles over raw derivations. A sentential form is tracked as
// the sequence of its non-terminal ids plus an accumulated cost; terminals
// never disappear, so the cost is monotone along a derivation and the first
// terminal-only form popped from a cost-ordered queue is optimal.

struct FormCost {
    std::size_t cost;
    std::vector<std::uint32_t> nts;
    friend bool operator>(const FormCost& a, const FormCost& b)
    {
        return std::tie(a.cost, a.nts) > std::tie(b.cost, b.nts);
    }
};

/// Cheapest derivation from `a` to a terminal word; `rule_cost` prices each
/// rule application. Returns nullopt when none exists within `max_nts`
/// simultaneous non-terminals.
template <class Cost>
std::optional<std::size_t> cheapest_derivation(const Grammar& g, NonTerminal a, Cost rule_cost, std::size_t max_nts = 12)
{
    std::priority_queue<FormCost, std::vector<FormCost>, std::greater<>> q;
    std::map<std::vector<std::uint32_t>, std::size_t> best;
    q.push({0, {a.id}});
    while (!q.empty()) {
        auto [cost, nts] = q.top();
        q.pop();
        if (nts.empty()) return cost;
        if (auto it = best.find(nts); it != best.end() && it->second < cost) continue;
        for (auto ri : g.rules_for(NonTerminal{nts.front()})) {
            const auto& r = g.rule(ri);
            std::vector<std::uint32_t> next;
            for (const auto& l : r.rhs)
                if (is_nonterminal(l)) next.push_back(as_nonterminal(l).id);
            next.insert(next.end(), nts.begin() + 1, nts.end());
            if (next.size() > max_nts) continue;
            auto c = cost + rule_cost(r);
            auto [it, fresh] = best.emplace(next, c);
            if (!fresh) {
                if (it->second <= c) continue;
                it->second = c;
            }
            q.push({c, std::move(next)});
        }
    }
    return std::nullopt;
}

inline std::optional<std::size_t> brute_min_length(const Grammar& g, NonTerminal a)
{
    return cheapest_derivation(g, a, [](const Rule& r) {
        std::size_t n = 0;
        for (const auto& l : r.rhs)
            if (is_ds(l)) n += as_ds(l).size();
        return n;
    });
}

inline std::optional<std::size_t> brute_min_distance(const Grammar& g, NonTerminal a)
{
    return cheapest_derivation(g, a, [](const Rule&) { return std::size_t{1}; });
}

/// Text of g with non-terminals renamed by first visit from the start
/// symbol and rules sorted, so grammars equal up to renaming compare equal.
inline std::string shape(const Grammar& g)
{
    std::vector<std::int64_t> label(g.nonterminal_count(), -1);
    std::vector<std::uint32_t> order{g.start().id};
    label[g.start().id] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto ri : g.rules_for(NonTerminal{order[i]}))
            for (const auto& l : g.rule(ri).rhs)
                if (is_nonterminal(l) && label[as_nonterminal(l).id] < 0) {
                    label[as_nonterminal(l).id] = static_cast<std::int64_t>(order.size());
                    order.push_back(as_nonterminal(l).id);
                }
    std::vector<std::string> lines;
    for (const auto& r : g.rules()) {
        std::string line = "N" + std::to_string(label[r.lhs.id]) + " ->";
        for (const auto& l : r.rhs)
            line += is_nonterminal(l) ? " N" + std::to_string(label[as_nonterminal(l).id])
                                      : " [" + as_ds(l).upper + "/" + as_ds(l).lower + "]";
        lines.push_back(line);
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

/// Membership by search with all pruning; a budget exhaustion is a test failure.
inline bool accepts(const Grammar& g, std::string_view input, PrecedenceKind kind = PrecedenceKind::nta_tm1)
{
    auto o = search(g, input, PruneConfig::all(), kind, SearchBudget::nodes(2'000'000));
    if (o.decision == Decision::exhausted_budget)
        throw std::runtime_error("search exhausted its budget on '" + std::string(input) + "'");
    return o.decision == Decision::accepted;
}

/// Per-grammar exhaustive length bound used by the language sweeps.
inline std::size_t sweep_bound(int id)
{
    switch (corpus::alphabet(id).size()) {
    case 1: return 12;
    case 2: return 8;
    case 3: return 6;
    case 4: return 5;
    default: return id == 4 ? 2 : 3;
    }
}

}  // namespace testing_support
