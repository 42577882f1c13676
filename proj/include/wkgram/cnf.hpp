#ifndef WKGRAM_CNF_HPP
#define WKGRAM_CNF_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace wkgram {

struct CnfReport {
    std::set<std::string> nullable_nonterminals;
    std::set<std::pair<std::string, std::string>> unit_pairs;  // (A, B) with A =>* B, A != B
    std::size_t fresh_symbol_count = 0;
    std::size_t rules_before = 0;
    std::size_t rules_after = 0;
};

namespace detail {

inline bool is_lambda_rhs(const std::vector<Letter>& rhs)
{
    return rhs.size() == 1 && is_ds(rhs[0]) && as_ds(rhs[0]).empty();
}

inline bool is_single_terminal(const Letter& l)
{
    return is_ds(l) && as_ds(l).size() == 1;
}

/// Mutable working copy of a grammar used by the transformation passes.
struct Draft {
    std::vector<std::string> names;
    NonTerminal start;
    Relation relation;
    std::string terminals;
    std::vector<Rule> rules;
    std::size_t fresh_counter = 0;
    std::size_t fresh_created = 0;

    explicit Draft(const Grammar& g)
        : names(g.names()), start(g.start()), relation(g.relation()), terminals(g.terminals()), rules(g.rules())
    {
    }

    NonTerminal fresh()
    {
        std::set<std::string> taken(names.begin(), names.end());
        std::string n;
        do {
            n = "X" + std::to_string(++fresh_counter);
        } while (taken.count(n));
        names.push_back(n);
        ++fresh_created;
        return NonTerminal{static_cast<std::uint32_t>(names.size() - 1)};
    }

    void add_rule(NonTerminal lhs, std::vector<Letter> rhs)
    {
        Rule r;
        r.lhs = lhs;
        r.rhs = canonical_letters(rhs);
        rules.push_back(std::move(r));
    }

    /// Removes duplicate rules (keeping the first occurrence), rules that
    /// refer to non-terminals without rules, and unreachable non-terminals.
    /// Non-terminal ids are compacted afterwards.
    void cleanup()
    {
        std::set<std::string> seen;
        std::vector<Rule> kept;
        for (auto& r : rules) {
            std::string key = std::to_string(r.lhs.id) + ":";
            for (const auto& l : r.rhs) {
                if (is_nonterminal(l))
                    key += "N" + std::to_string(as_nonterminal(l).id) + ",";
                else
                    key += "[" + as_ds(l).upper + "/" + as_ds(l).lower + "],";
            }
            if (seen.insert(key).second) kept.push_back(std::move(r));
        }
        rules = std::move(kept);

        for (bool changed = true; changed;) {
            changed = false;
            std::vector<bool> has_rules(names.size(), false);
            for (const auto& r : rules) has_rules[r.lhs.id] = true;
            std::vector<Rule> next;
            for (auto& r : rules) {
                bool ok = std::all_of(r.rhs.begin(), r.rhs.end(), [&](const Letter& l) {
                    return !is_nonterminal(l) || has_rules[as_nonterminal(l).id];
                });
                if (ok)
                    next.push_back(std::move(r));
                else
                    changed = true;
            }
            rules = std::move(next);
        }

        std::vector<bool> reach(names.size(), false);
        reach[start.id] = true;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : rules) {
                if (!reach[r.lhs.id]) continue;
                for (const auto& l : r.rhs)
                    if (is_nonterminal(l) && !reach[as_nonterminal(l).id]) {
                        reach[as_nonterminal(l).id] = true;
                        changed = true;
                    }
            }
        }
        std::vector<Rule> next;
        for (auto& r : rules)
            if (reach[r.lhs.id]) next.push_back(std::move(r));
        rules = std::move(next);

        std::vector<std::uint32_t> remap(names.size(), UINT32_MAX);
        std::vector<std::string> new_names;
        for (std::uint32_t i = 0; i < names.size(); ++i)
            if (reach[i]) {
                remap[i] = static_cast<std::uint32_t>(new_names.size());
                new_names.push_back(names[i]);
            }
        for (auto& r : rules) {
            r.lhs.id = remap[r.lhs.id];
            for (auto& l : r.rhs)
                if (is_nonterminal(l)) l = NonTerminal{remap[as_nonterminal(l).id]};
        }
        start.id = remap[start.id];
        names = std::move(new_names);
    }

    Grammar build() const { return Grammar(names, start, relation, rules, terminals); }
};

inline std::vector<bool> nullable_set(const Draft& d)
{
    std::vector<bool> nullable(d.names.size(), false);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : d.rules) {
            if (nullable[r.lhs.id]) continue;
            bool all = std::all_of(r.rhs.begin(), r.rhs.end(), [&](const Letter& l) {
                return is_nonterminal(l) ? nullable[as_nonterminal(l).id] : as_ds(l).empty();
            });
            if (all) {
                nullable[r.lhs.id] = true;
                changed = true;
            }
        }
    }
    return nullable;
}

inline void remove_lambda(Draft& d, CnfReport* report)
{
    auto nullable = nullable_set(d);
    if (report)
        for (std::uint32_t i = 0; i < d.names.size(); ++i)
            if (nullable[i]) report->nullable_nonterminals.insert(d.names[i]);

    bool any_lambda = std::any_of(d.rules.begin(), d.rules.end(), [](const Rule& r) { return is_lambda_rhs(r.rhs); });
    if (!any_lambda) return;

    bool lambda_in_language = nullable[d.start.id];
    std::vector<Rule> old = std::move(d.rules);
    d.rules.clear();
    for (const auto& r : old) {
        std::vector<std::size_t> optional_positions;
        for (std::size_t i = 0; i < r.rhs.size(); ++i)
            if (is_nonterminal(r.rhs[i]) && nullable[as_nonterminal(r.rhs[i]).id]) optional_positions.push_back(i);
        const std::size_t variants = std::size_t{1} << optional_positions.size();
        // Bit set means "drop this occurrence". Mask 0 keeps everything.
        for (std::size_t mask = 0; mask < variants; ++mask) {
            std::vector<Letter> rhs;
            std::size_t next_opt = 0;
            for (std::size_t i = 0; i < r.rhs.size(); ++i) {
                if (next_opt < optional_positions.size() && optional_positions[next_opt] == i) {
                    bool drop = (mask >> next_opt) & 1u;
                    ++next_opt;
                    if (drop) continue;
                }
                rhs.push_back(r.rhs[i]);
            }
            auto canon = canonical_letters(rhs);
            if (is_lambda_rhs(canon)) continue;
            if (canon.size() == 1 && is_nonterminal(canon[0]) && as_nonterminal(canon[0]) == r.lhs) continue;
            d.add_rule(r.lhs, std::move(canon));
        }
    }
    if (lambda_in_language) {
        NonTerminal s2 = d.fresh();
        NonTerminal old_start = d.start;
        d.start = s2;
        d.add_rule(s2, {old_start});
        d.add_rule(s2, {DsString{}});
    }
    d.cleanup();
}

inline void remove_units(Draft& d, CnfReport* report)
{
    const std::size_t n = d.names.size();
    // unit[a][b]: a =>* b using unit rules only (reflexive).
    std::vector<std::vector<bool>> unit(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) unit[a][a] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : d.rules) {
            if (r.rhs.size() != 1 || !is_nonterminal(r.rhs[0])) continue;
            auto b = as_nonterminal(r.rhs[0]).id;
            for (std::size_t a = 0; a < n; ++a)
                if (unit[a][r.lhs.id] && !unit[a][b]) {
                    unit[a][b] = true;
                    changed = true;
                }
        }
    }
    if (report)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (a != b && unit[a][b]) report->unit_pairs.emplace(d.names[a], d.names[b]);

    std::vector<std::vector<std::size_t>> by_lhs(n);
    for (std::size_t i = 0; i < d.rules.size(); ++i) by_lhs[d.rules[i].lhs.id].push_back(i);

    std::vector<Rule> old = std::move(d.rules);
    d.rules.clear();
    for (std::uint32_t a = 0; a < n; ++a) {
        // a's own non-unit rules first, then those inherited in id order.
        std::vector<std::uint32_t> sources{a};
        for (std::uint32_t b = 0; b < n; ++b)
            if (b != a && unit[a][b]) sources.push_back(b);
        for (auto b : sources)
            for (auto ri : by_lhs[b]) {
                const auto& r = old[ri];
                if (r.rhs.size() == 1 && is_nonterminal(r.rhs[0])) continue;
                d.add_rule(NonTerminal{a}, r.rhs);
            }
    }
    d.cleanup();
}

inline void isolate_terminals(Draft& d)
{
    std::map<DsString, NonTerminal> shared;
    auto terminal_nt = [&](DsString ds) {
        auto it = shared.find(ds);
        if (it != shared.end()) return it->second;
        NonTerminal n = d.fresh();
        shared.emplace(ds, n);
        d.add_rule(n, {ds});
        return n;
    };
    std::vector<Rule> old = std::move(d.rules);
    d.rules.clear();
    for (const auto& r : old) {
        bool already_terminal = r.rhs.size() == 1 && is_single_terminal(r.rhs[0]);
        bool lambda = is_lambda_rhs(r.rhs);
        if (already_terminal || lambda) {
            d.rules.push_back(r);
            continue;
        }
        std::vector<Letter> rhs;
        for (const auto& l : r.rhs) {
            if (is_nonterminal(l)) {
                rhs.push_back(l);
                continue;
            }
            // Upper symbols first, then lower symbols: (u/l) == (u/λ)(λ/l).
            for (char c : as_ds(l).upper) rhs.emplace_back(terminal_nt(DsString{std::string(1, c), {}}));
            for (char c : as_ds(l).lower) rhs.emplace_back(terminal_nt(DsString{{}, std::string(1, c)}));
        }
        Rule nr;
        nr.lhs = r.lhs;
        nr.rhs = std::move(rhs);
        d.rules.push_back(std::move(nr));
    }
}

inline void binarize(Draft& d)
{
    std::vector<Rule> old = std::move(d.rules);
    d.rules.clear();
    for (auto& r : old) {
        if (r.rhs.size() <= 2) {
            d.rules.push_back(std::move(r));
            continue;
        }
        NonTerminal lhs = r.lhs;
        for (std::size_t i = 0; i + 2 < r.rhs.size(); ++i) {
            NonTerminal tail = d.fresh();
            d.add_rule(lhs, {r.rhs[i], tail});
            lhs = tail;
        }
        d.add_rule(lhs, {r.rhs[r.rhs.size() - 2], r.rhs.back()});
    }
}

}  // namespace detail

/// True iff every rule has one of the forms A -> (a/λ), A -> (λ/a),
/// A -> BC, or S -> (λ/λ) for the start symbol S, which then must not
/// occur on any right-hand side.
inline bool is_wk_cnf(const Grammar& g)
{
    bool start_lambda = false;
    bool start_on_rhs = false;
    for (const auto& r : g.rules()) {
        if (detail::is_lambda_rhs(r.rhs)) {
            if (r.lhs != g.start()) return false;
            start_lambda = true;
            continue;
        }
        if (r.rhs.size() == 1 && detail::is_single_terminal(r.rhs[0])) continue;
        if (r.rhs.size() == 2 && is_nonterminal(r.rhs[0]) && is_nonterminal(r.rhs[1])) {
            if (as_nonterminal(r.rhs[0]) == g.start() || as_nonterminal(r.rhs[1]) == g.start()) start_on_rhs = true;
            continue;
        }
        return false;
    }
    return !(start_lambda && start_on_rhs);
}

/// Removes lambda rules. When the start symbol is nullable a fresh start
/// S' -> S | (λ/λ) is introduced so that lambda stays in the language.
inline Grammar remove_lambda_rules(const Grammar& g, CnfReport* report = nullptr)
{
    detail::Draft d(g);
    detail::remove_lambda(d, report);
    if (report) report->fresh_symbol_count += d.fresh_created;
    return d.build();
}

/// Standard CNF pipeline adapted to double strands: lambda removal, unit
/// removal, terminal isolation (upper then lower symbols, shared fresh
/// non-terminals per single-symbol DS letter), right-branching binarization.
inline std::pair<Grammar, CnfReport> to_wk_cnf(const Grammar& g)
{
    CnfReport report;
    report.rules_before = g.rules().size();
    detail::Draft d(g);
    detail::remove_lambda(d, &report);
    detail::remove_units(d, &report);
    detail::isolate_terminals(d);
    detail::binarize(d);
    report.fresh_symbol_count = d.fresh_created;
    Grammar out = d.build();
    report.rules_after = out.rules().size();
    return {std::move(out), std::move(report)};
}

}  // namespace wkgram

#endif  // WKGRAM_CNF_HPP
