#ifndef WKGRAM_SEARCH_HPP
#define WKGRAM_SEARCH_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "core.hpp"

namespace wkgram {

// ---------------------------------------------------------------------------
// Configuration surface

enum class PruneKind { sl = 0, tl, ws, rl, re };
inline constexpr std::array<PruneKind, 5> all_prune_kinds{PruneKind::sl, PruneKind::tl, PruneKind::ws, PruneKind::rl,
                                                          PruneKind::re};

inline std::string_view to_string(PruneKind k)
{
    constexpr std::array<std::string_view, 5> names{"sl", "tl", "ws", "rl", "re"};
    return names[static_cast<std::size_t>(k)];
}

/// Which pruning heuristics are active. Any subset is allowed.
struct PruneConfig {
    bool sl = true;
    bool tl = true;
    bool ws = true;
    bool rl = true;
    bool re = true;

    static PruneConfig all() { return {}; }
    static PruneConfig none() { return {false, false, false, false, false}; }

    /// Bit i set = heuristic i active (order sl, tl, ws, rl, re).
    static PruneConfig from_mask(unsigned mask)
    {
        return {(mask & 1u) != 0, (mask & 2u) != 0, (mask & 4u) != 0, (mask & 8u) != 0, (mask & 16u) != 0};
    }
    unsigned mask() const { return (sl ? 1u : 0u) | (tl ? 2u : 0u) | (ws ? 4u : 0u) | (rl ? 8u : 0u) | (re ? 16u : 0u); }

    bool active(PruneKind k) const { return (mask() >> static_cast<unsigned>(k)) & 1u; }
    PruneConfig without(PruneKind k) const { return from_mask(mask() & ~(1u << static_cast<unsigned>(k))); }

    friend bool operator==(const PruneConfig&, const PruneConfig&) = default;
};

/// "all", "none", or a comma list over sl,tl,ws,rl,re.
inline PruneConfig parse_prune_config(std::string_view text)
{
    if (text == "all") return PruneConfig::all();
    if (text == "none") return PruneConfig::none();
    unsigned mask = 0;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto tok = text.substr(0, comma);
        bool found = false;
        for (auto k : all_prune_kinds)
            if (tok == to_string(k)) {
                mask |= 1u << static_cast<unsigned>(k);
                found = true;
            }
        if (!found) throw std::invalid_argument("unknown pruning heuristic '" + std::string(tok) + "'");
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
        if (text.empty()) throw std::invalid_argument("trailing comma in prune set");
    }
    if (mask == 0) throw std::invalid_argument("empty prune set (use 'none')");
    return PruneConfig::from_mask(mask);
}

inline std::string to_string(const PruneConfig& c)
{
    if (c == PruneConfig::all()) return "all";
    if (c == PruneConfig::none()) return "none";
    std::string s;
    for (auto k : all_prune_kinds)
        if (c.active(k)) {
            if (!s.empty()) s += ',';
            s += to_string(k);
        }
    return s;
}

enum class PrecedenceKind {
    none,
    nta,
    wnta,
    tm1,
    tm2,
    tm3,
    nta_tm1,
    nta_tm2,
    nta_tm3,
    wnta_tm1,
    wnta_tm2,
    wnta_tm3,
};

inline constexpr std::array<PrecedenceKind, 12> all_precedence_kinds{
    PrecedenceKind::none,     PrecedenceKind::nta,      PrecedenceKind::wnta,     PrecedenceKind::tm1,
    PrecedenceKind::tm2,      PrecedenceKind::tm3,      PrecedenceKind::nta_tm1,  PrecedenceKind::nta_tm2,
    PrecedenceKind::nta_tm3,  PrecedenceKind::wnta_tm1, PrecedenceKind::wnta_tm2, PrecedenceKind::wnta_tm3,
};

inline std::string_view to_string(PrecedenceKind k)
{
    constexpr std::array<std::string_view, 12> names{"none",    "nta",     "wnta",     "tm1",      "tm2",      "tm3",
                                                     "nta+tm1", "nta+tm2", "nta+tm3", "wnta+tm1", "wnta+tm2", "wnta+tm3"};
    return names[static_cast<std::size_t>(k)];
}

inline PrecedenceKind parse_precedence(std::string_view text)
{
    for (auto k : all_precedence_kinds)
        if (to_string(k) == text) return k;
    throw std::invalid_argument("unknown precedence heuristic '" + std::string(text) + "'");
}

struct SearchBudget {
    std::optional<std::chrono::duration<double>> time_limit;
    std::optional<std::uint64_t> node_limit;  ///< maximum expansions
    std::optional<std::size_t> memory_limit;  ///< bytes held by the visited set and queue

    bool bounded() const noexcept { return time_limit.has_value() || node_limit.has_value(); }

    static SearchBudget seconds(double s) { return {std::chrono::duration<double>(s), std::nullopt, std::nullopt}; }
    static SearchBudget nodes(std::uint64_t n) { return {std::nullopt, n, std::nullopt}; }
    SearchBudget with_memory_limit(std::size_t bytes) const
    {
        auto b = *this;
        b.memory_limit = bytes;
        return b;
    }
};

enum class Decision { accepted, rejected, exhausted_budget };

inline std::string_view to_string(Decision d)
{
    switch (d) {
    case Decision::accepted: return "accepted";
    case Decision::rejected: return "rejected";
    case Decision::exhausted_budget: return "exhausted";
    }
    return "?";
}

struct SearchStats {
    std::uint64_t generated = 0;   ///< candidate words produced by rule application
    std::uint64_t expanded = 0;    ///< nodes whose successors were generated
    std::uint64_t duplicates = 0;  ///< candidates already in the visited set
    std::uint64_t enqueued = 0;
    std::array<std::uint64_t, 5> pruned{};  ///< indexed by PruneKind
    std::size_t peak_queue = 0;
    double elapsed_seconds = 0.0;
    bool timed_out = false;
    bool memory_exhausted = false;

    std::uint64_t pruned_by(PruneKind k) const { return pruned[static_cast<std::size_t>(k)]; }
};

struct SearchOutcome {
    Decision decision = Decision::exhausted_budget;
    SearchStats stats;
    /// Rule indices of a leftmost derivation of the accepted word, when
    /// requested via SearchOptions::record_derivation.
    std::optional<std::vector<std::size_t>> derivation;
};

struct SearchOptions {
    bool record_derivation = false;
    /// Store 64-bit hashes instead of full serializations in the visited set.
    bool hash_only_visited = false;
    /// Called for every word pushed onto the queue (including the root).
    std::function<void(const WkWord&)> on_enqueue;
};

// ---------------------------------------------------------------------------
// Pruning heuristics

enum class PruneVerdict { keep, prune };

/// SL: a strand already longer than the input can never shrink.
inline PruneVerdict prune_sl(const WkWord& word, std::size_t input_length)
{
    return word.upper_length() > input_length || word.lower_length() > input_length ? PruneVerdict::prune
                                                                                     : PruneVerdict::keep;
}

/// TL: |upper| + |lower| + |nts| <= 2 |input|.
inline PruneVerdict prune_tl(const WkWord& word, std::size_t input_length)
{
    return word.total_length() > MinCount(2 * input_length) ? PruneVerdict::prune : PruneVerdict::keep;
}

/// WS: a leading DS letter's upper strand must be a prefix of the input.
inline PruneVerdict prune_ws(const WkWord& word, std::string_view input)
{
    if (word.size() == 0 || !is_ds(word[0])) return PruneVerdict::keep;
    return input.starts_with(as_ds(word[0]).upper) ? PruneVerdict::keep : PruneVerdict::prune;
}

/// RL: the leading DS letter's strands must be related up to the shorter one.
inline PruneVerdict prune_rl(const WkWord& word, const Relation& relation)
{
    if (word.size() == 0 || !is_ds(word[0])) return PruneVerdict::keep;
    const auto& ds = as_ds(word[0]);
    const auto m = std::min(ds.upper.size(), ds.lower.size());
    for (std::size_t i = 0; i < m; ++i)
        if (!relation.contains(ds.upper[i], ds.lower[i])) return PruneVerdict::prune;
    return PruneVerdict::keep;
}

/// Upper-strand literals separated by unconstrained gaps (one gap per run
/// of non-terminals).
struct MatchPattern {
    bool anchored_start = false;
    bool anchored_end = false;
    std::vector<std::string> segments;

    friend bool operator==(const MatchPattern&, const MatchPattern&) = default;
};

inline MatchPattern build_pattern(const WkWord& word)
{
    MatchPattern p;
    const auto& ls = word.letters();
    // A DS letter with an empty upper strand contributes nothing, so it can
    // not anchor anything either.
    auto anchoring = [](const Letter& l) { return is_ds(l) && !as_ds(l).upper.empty(); };
    if (!ls.empty()) {
        p.anchored_start = anchoring(ls.front());
        p.anchored_end = anchoring(ls.back());
    }
    for (const auto& l : ls)
        if (is_ds(l) && !as_ds(l).upper.empty()) p.segments.push_back(as_ds(l).upper);
    return p;
}

inline bool pattern_matches(const MatchPattern& p, std::string_view input)
{
    if (p.segments.empty()) return true;
    if (p.anchored_start && p.anchored_end && p.segments.size() == 1) return input == p.segments[0];

    std::size_t pos = 0;
    std::size_t first = 0;
    std::size_t last = p.segments.size();
    if (p.anchored_start) {
        if (!input.starts_with(p.segments[0])) return false;
        pos = p.segments[0].size();
        first = 1;
    }
    if (p.anchored_end) last -= 1;
    for (std::size_t s = first; s < last; ++s) {
        auto at = input.find(p.segments[s], pos);
        if (at == std::string_view::npos) return false;
        pos = at + p.segments[s].size();
    }
    if (p.anchored_end) {
        const auto& tail = p.segments.back();
        if (!input.ends_with(tail)) return false;
        if (input.size() - tail.size() < pos) return false;
    }
    return true;
}

/// RE: the upper strands, with non-terminals as wildcards, must match input.
inline PruneVerdict prune_re(const WkWord& word, std::string_view input)
{
    return pattern_matches(build_pattern(word), input) ? PruneVerdict::keep : PruneVerdict::prune;
}

/// Runs the active heuristics in the order SL, TL, WS, RL, RE and returns the
/// first one that prunes.
inline std::optional<PruneKind> first_pruning(const WkWord& word, std::string_view input, const Relation& relation,
                                              const PruneConfig& cfg)
{
    if (cfg.sl && prune_sl(word, input.size()) == PruneVerdict::prune) return PruneKind::sl;
    if (cfg.tl && prune_tl(word, input.size()) == PruneVerdict::prune) return PruneKind::tl;
    if (cfg.ws && prune_ws(word, input) == PruneVerdict::prune) return PruneKind::ws;
    if (cfg.rl && prune_rl(word, relation) == PruneVerdict::prune) return PruneKind::rl;
    if (cfg.re && prune_re(word, input) == PruneVerdict::prune) return PruneKind::re;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Node precedence

namespace detail {

// Stand-in for an infinite derivation distance in evaluations.
inline constexpr std::int64_t unproductive_weight = std::int64_t{1} << 40;

inline std::int64_t eval_nta(const WkWord& w)
{
    return static_cast<std::int64_t>(
        std::count_if(w.letters().begin(), w.letters().end(), [](const Letter& l) { return is_nonterminal(l); }));
}

inline std::int64_t eval_wnta(const WkWord& w, std::span<const MinCount> min_dist)
{
    std::int64_t sum = 0;
    for (const auto& l : w.letters()) {
        if (!is_nonterminal(l)) continue;
        auto d = min_dist[as_nonterminal(l).id];
        sum += d.is_finite() ? static_cast<std::int64_t>(d.value()) : unproductive_weight;
    }
    return sum;
}

// Upper strands concatenated left to right, non-terminals skipped.
inline std::int64_t eval_tm1(const WkWord& w, std::string_view input)
{
    std::size_t pos = 0;
    for (const auto& l : w.letters()) {
        if (!is_ds(l)) continue;
        for (char c : as_ds(l).upper) {
            if (pos >= input.size() || input[pos] != c) return -static_cast<std::int64_t>(pos);
            ++pos;
        }
    }
    return -static_cast<std::int64_t>(pos);
}

inline std::int64_t eval_tm2(const WkWord& w, std::string_view input)
{
    std::size_t pos = 0;
    std::int64_t v = 0;
    for (const auto& l : w.letters()) {
        if (!is_ds(l)) continue;
        for (char c : as_ds(l).upper) {
            if (pos >= input.size()) return v;
            v += input[pos] == c ? -1 : 1;
            ++pos;
        }
    }
    return v;
}

inline std::int64_t eval_tm3(const WkWord& w, std::string_view input)
{
    if (w.size() == 0 || !is_ds(w[0])) return 0;
    const auto& u = as_ds(w[0]).upper;
    std::size_t pos = 0;
    while (pos < u.size() && pos < input.size() && u[pos] == input[pos]) ++pos;
    return -static_cast<std::int64_t>(pos);
}

}  // namespace detail

/// Node evaluation; lower values are expanded first.
inline std::int64_t evaluate(const WkWord& word, PrecedenceKind kind, std::string_view input,
                             std::span<const MinCount> min_distances)
{
    using detail::eval_nta, detail::eval_wnta, detail::eval_tm1, detail::eval_tm2, detail::eval_tm3;
    switch (kind) {
    case PrecedenceKind::none: return 0;
    case PrecedenceKind::nta: return eval_nta(word);
    case PrecedenceKind::wnta: return eval_wnta(word, min_distances);
    case PrecedenceKind::tm1: return eval_tm1(word, input);
    case PrecedenceKind::tm2: return eval_tm2(word, input);
    case PrecedenceKind::tm3: return eval_tm3(word, input);
    case PrecedenceKind::nta_tm1: return eval_nta(word) + eval_tm1(word, input);
    case PrecedenceKind::nta_tm2: return eval_nta(word) + eval_tm2(word, input);
    case PrecedenceKind::nta_tm3: return eval_nta(word) + eval_tm3(word, input);
    case PrecedenceKind::wnta_tm1: return eval_wnta(word, min_distances) + eval_tm1(word, input);
    case PrecedenceKind::wnta_tm2: return eval_wnta(word, min_distances) + eval_tm2(word, input);
    case PrecedenceKind::wnta_tm3: return eval_wnta(word, min_distances) + eval_tm3(word, input);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Expansion and search

struct Successor {
    std::size_t rule;
    WkWord word;
};

/// One successor per rule of the leftmost non-terminal, in grammar order.
inline std::vector<Successor> expand(const WkWord& word, const Grammar& g)
{
    auto pos = leftmost_nonterminal(word);
    if (!pos) throw std::invalid_argument("expand: word has no non-terminal");
    std::vector<Successor> out;
    for (auto ri : g.rules_for(as_nonterminal(word[*pos]))) out.push_back({ri, apply_rule(word, *pos, g.rule(ri), g)});
    return out;
}

/// Replays a leftmost derivation from the start symbol.
inline WkWord replay_derivation(const Grammar& g, std::span<const std::size_t> rules)
{
    WkWord w = canonicalize({Letter{g.start()}}, g);
    for (auto ri : rules) {
        auto pos = leftmost_nonterminal(w);
        if (!pos) throw std::invalid_argument("replay_derivation: word is already terminal");
        w = apply_rule(w, *pos, g.rule(ri), g);
    }
    return w;
}

namespace detail {

// Every enqueued word, stored once as its compact key. Ids are dense and
// assigned in insertion order. Deduplication uses an open-addressing table
// over the stored keys, or over 64-bit hashes only in hash-only mode.
class WordStore {
public:
    explicit WordStore(bool hash_only) : hash_only_(hash_only) { slots_.assign(1024, empty); }

    /// Stores the key and returns its id, or nullopt when already present.
    std::optional<std::uint32_t> insert(std::string_view key)
    {
        if (2 * (count_ + 1) > slots_.size()) grow();
        const auto h = std::hash<std::string_view>{}(key);
        if (hash_only_) {
            if (!hashes_.insert(h).second) return std::nullopt;
            return append(key);
        }
        auto mask = slots_.size() - 1;
        for (auto i = h & mask;; i = (i + 1) & mask) {
            if (slots_[i] == empty) {
                auto id = append(key);
                slots_[i] = id;
                ++count_;
                return id;
            }
            if (get(slots_[i]) == key) return std::nullopt;
        }
    }

    /// Bytes reserved by the store's containers.
    std::size_t bytes() const noexcept
    {
        return bytes_.capacity() + offsets_.capacity() * sizeof(std::uint64_t) +
               slots_.capacity() * sizeof(std::uint32_t) + hashes_.size() * 4 * sizeof(std::size_t);
    }

    std::string_view get(std::uint32_t id) const
    {
        return {bytes_.data() + offsets_[id], static_cast<std::size_t>(offsets_[id + 1] - offsets_[id])};
    }

private:
    static constexpr std::uint32_t empty = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t append(std::string_view key)
    {
        auto id = static_cast<std::uint32_t>(offsets_.size() - 1);
        bytes_.insert(bytes_.end(), key.begin(), key.end());
        offsets_.push_back(bytes_.size());
        return id;
    }

    void grow()
    {
        if (hash_only_) return;
        std::vector<std::uint32_t> next(slots_.size() * 2, empty);
        auto mask = next.size() - 1;
        for (auto id : slots_) {
            if (id == empty) continue;
            auto i = std::hash<std::string_view>{}(get(id)) & mask;
            while (next[i] != empty) i = (i + 1) & mask;
            next[i] = id;
        }
        slots_ = std::move(next);
    }

    bool hash_only_;
    std::vector<char> bytes_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<std::uint32_t> slots_;
    std::size_t count_ = 0;
    std::unordered_set<std::size_t> hashes_;
};

struct QueueEntry {
    std::int64_t evaluation;
    std::uint32_t id;  ///< word id; also the FIFO tie-break
};

// Max-heap comparator yielding lowest evaluation, then lowest id, first.
struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const
    {
        if (a.evaluation != b.evaluation) return a.evaluation > b.evaluation;
        return a.id > b.id;
    }
};

}  // namespace detail

/// Best-first search over leftmost derivations. Returns Accepted when a
/// solution word is popped, Rejected when the queue empties and
/// Exhausted-budget when the time, node or memory limit trips.
inline SearchOutcome search(const Grammar& g, std::string_view input, const PruneConfig& prune,
                            PrecedenceKind precedence, const SearchBudget& budget, const SearchOptions& options = {})
{
    if (auto diags = validate(g); diags.has_errors()) {
        for (const auto& d : diags.items)
            if (d.severity == Severity::error) throw grammar_error("invalid grammar: " + d.message);
    }
    if (!budget.bounded() && (g.has_lambda_rules() || !prune.tl))
        throw std::invalid_argument(
            "search: an unbounded budget requires a lambda-free grammar and the TL heuristic");

    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    const auto deadline =
        budget.time_limit ? std::optional(t0 + std::chrono::duration_cast<clock::duration>(*budget.time_limit))
                          : std::nullopt;

    SearchOutcome outcome;
    auto& st = outcome.stats;

    struct Trace {
        std::uint32_t parent;
        std::uint32_t rule;
    };
    std::vector<Trace> trace;  // indexed by word id, only when recording
    constexpr auto no_parent = std::numeric_limits<std::uint32_t>::max();

    detail::WordStore store(options.hash_only_visited);
    std::vector<detail::QueueEntry> heap;
    detail::QueueOrder order;
    std::string key;

    auto push = [&](const WkWord& word, std::uint32_t id) {
        auto eval = evaluate(word, precedence, input, g.min_distances());
        if (options.on_enqueue) options.on_enqueue(word);
        heap.push_back({eval, id});
        std::push_heap(heap.begin(), heap.end(), order);
        ++st.enqueued;
        st.peak_queue = std::max(st.peak_queue, heap.size());
    };

    {
        WkWord root = canonicalize({Letter{g.start()}}, g);
        encode_word(root, key);
        auto id = *store.insert(key);
        if (options.record_derivation) trace.push_back({no_parent, 0});
        push(root, id);
    }

    auto finish = [&](Decision d) {
        outcome.decision = d;
        st.elapsed_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        return outcome;
    };

    while (!heap.empty()) {
        if (deadline && clock::now() >= *deadline) {
            st.timed_out = true;
            return finish(Decision::exhausted_budget);
        }
        if (budget.node_limit && st.expanded >= *budget.node_limit) return finish(Decision::exhausted_budget);
        if (budget.memory_limit && store.bytes() + heap.capacity() * sizeof(detail::QueueEntry) > *budget.memory_limit) {
            st.memory_exhausted = true;
            return finish(Decision::exhausted_budget);
        }

        std::pop_heap(heap.begin(), heap.end(), order);
        const auto cur = heap.back();
        heap.pop_back();
        const WkWord word = decode_word(store.get(cur.id), g);

        auto pos = leftmost_nonterminal(word);
        if (!pos) {
            if (is_solution(word, input, g.relation())) {
                if (options.record_derivation) {
                    std::vector<std::size_t> rules;
                    for (auto n = cur.id; trace[n].parent != no_parent; n = trace[n].parent)
                        rules.push_back(trace[n].rule);
                    std::reverse(rules.begin(), rules.end());
                    outcome.derivation = std::move(rules);
                }
                return finish(Decision::accepted);
            }
            continue;
        }

        ++st.expanded;
        const auto lhs = as_nonterminal(word[*pos]);
        for (auto ri : g.rules_for(lhs)) {
            WkWord cand = apply_rule(word, *pos, g.rule(ri), g);
            ++st.generated;
            if (auto why = first_pruning(cand, input, g.relation(), prune)) {
                ++st.pruned[static_cast<std::size_t>(*why)];
                continue;
            }
            encode_word(cand, key);
            auto id = store.insert(key);
            if (!id) {
                ++st.duplicates;
                continue;
            }
            if (options.record_derivation) trace.push_back({cur.id, static_cast<std::uint32_t>(ri)});
            push(cand, *id);
        }
    }
    return finish(Decision::rejected);
}

}  // namespace wkgram

#endif  // WKGRAM_SEARCH_HPP
