#ifndef WKGRAM_CORE_HPP
#define WKGRAM_CORE_HPP

#include <algorithm>
#include <array>
#include <bitset>
#include <cassert>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace wkgram {

/// Raised when a grammar violates a structural invariant (unknown symbols,
/// asymmetric relation, ...). The CLI maps it to exit code 65.
class grammar_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an engine is asked to run on a grammar outside its domain
/// (e.g. WK-CYK on a non-CNF grammar). The CLI maps it to exit code 66.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Characters that cannot be terminals because the grammar format uses them.
inline constexpr std::string_view reserved_chars = "[]/|#~:->";

constexpr bool is_valid_terminal(char c) noexcept
{
    if (c >= 'A' && c <= 'Z') return false;
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
    if (static_cast<unsigned char>(c) < 0x21 || static_cast<unsigned char>(c) > 0x7e) return false;
    return reserved_chars.find(c) == std::string_view::npos;
}

/// A non-negative count that may be infinite. Used for minimum terminal
/// lengths and derivation distances of unproductive non-terminals.
class MinCount {
public:
    constexpr MinCount() noexcept = default;
    constexpr MinCount(std::uint64_t v) noexcept : value_(v) {}

    static constexpr MinCount infinite() noexcept
    {
        MinCount c;
        c.infinite_ = true;
        return c;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    constexpr std::uint64_t value() const
    {
        if (infinite_) throw std::logic_error("MinCount::value on infinite count");
        return value_;
    }

    friend constexpr MinCount operator+(MinCount a, MinCount b) noexcept
    {
        if (a.infinite_ || b.infinite_) return infinite();
        return MinCount(a.value_ + b.value_);
    }

    MinCount& operator+=(MinCount o) noexcept { return *this = *this + o; }

    friend constexpr bool operator==(MinCount a, MinCount b) noexcept
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }

    friend constexpr std::strong_ordering operator<=>(MinCount a, MinCount b) noexcept
    {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

private:
    std::uint64_t value_ = 0;
    bool infinite_ = false;
};

struct NonTerminal {
    std::uint32_t id = 0;
    friend constexpr auto operator<=>(NonTerminal, NonTerminal) = default;
};

/// A pair of terminal strings (upper strand, lower strand).
struct DsString {
    std::string upper;
    std::string lower;

    bool empty() const noexcept { return upper.empty() && lower.empty(); }
    std::size_t size() const noexcept { return upper.size() + lower.size(); }
    friend bool operator==(const DsString&, const DsString&) = default;
    friend auto operator<=>(const DsString&, const DsString&) = default;
};

using Letter = std::variant<NonTerminal, DsString>;

inline bool is_nonterminal(const Letter& l) noexcept { return std::holds_alternative<NonTerminal>(l); }
inline bool is_ds(const Letter& l) noexcept { return std::holds_alternative<DsString>(l); }
inline NonTerminal as_nonterminal(const Letter& l) { return std::get<NonTerminal>(l); }
inline const DsString& as_ds(const Letter& l) { return std::get<DsString>(l); }

/// Symmetric complementarity relation over terminals.
class Relation {
public:
    Relation() = default;

    /// {(t,t) | t in terminals}.
    static Relation identity(std::string_view terminals)
    {
        Relation r;
        for (char t : terminals) r.add(t, t);
        r.identity_ = true;
        return r;
    }

    void add(char a, char b)
    {
        rows_[uc(a)].set(uc(b));
        identity_ = false;
    }

    bool contains(char a, char b) const noexcept { return rows_[uc(a)].test(uc(b)); }

    /// Whether the relation was declared with the identity shorthand.
    bool declared_identity() const noexcept { return identity_; }

    std::vector<std::pair<char, char>> pairs() const
    {
        std::vector<std::pair<char, char>> out;
        for (unsigned a = 0; a < 256; ++a)
            for (unsigned b = 0; b < 256; ++b)
                if (rows_[a].test(b)) out.emplace_back(static_cast<char>(a), static_cast<char>(b));
        return out;
    }

    std::vector<std::pair<char, char>> asymmetric_pairs() const
    {
        std::vector<std::pair<char, char>> out;
        for (auto [a, b] : pairs())
            if (!contains(b, a)) out.emplace_back(a, b);
        return out;
    }

    bool is_symmetric() const { return asymmetric_pairs().empty(); }

    /// True iff the relation is exactly {(t,t) | t in terminals}.
    bool is_identity_on(std::string_view terminals) const
    {
        Relation id = identity(terminals);
        return id.rows_ == rows_;
    }

    friend bool operator==(const Relation& a, const Relation& b) noexcept { return a.rows_ == b.rows_; }

private:
    static constexpr std::size_t uc(char c) noexcept { return static_cast<unsigned char>(c); }

    std::array<std::bitset<256>, 256> rows_{};
    bool identity_ = false;
};

struct Rule {
    NonTerminal lhs;
    std::vector<Letter> rhs;  // canonical
    // Precomputed by Grammar.
    std::size_t upper_terminals = 0;
    std::size_t lower_terminals = 0;
    MinCount rhs_nt_budget;
    /// Terminals plus non-terminal lengths of rhs, minus the lhs length.
    /// Empty when either side is unproductive.
    std::optional<std::int64_t> length;
};

namespace detail {

// Appends a letter to a canonical prefix, merging adjacent DS-strings and
// dropping empty ones.
inline void append_canonical(std::vector<Letter>& out, const Letter& l)
{
    if (const auto* ds = std::get_if<DsString>(&l)) {
        if (ds->empty()) return;
        if (!out.empty()) {
            if (auto* last = std::get_if<DsString>(&out.back())) {
                last->upper += ds->upper;
                last->lower += ds->lower;
                return;
            }
        }
    }
    out.push_back(l);
}

inline void finish_canonical(std::vector<Letter>& out)
{
    if (out.empty()) out.emplace_back(DsString{});
}

inline std::vector<Letter> canonical_letters(std::span<const Letter> letters)
{
    std::vector<Letter> out;
    out.reserve(letters.size());
    for (const auto& l : letters) append_canonical(out, l);
    finish_canonical(out);
    return out;
}

}  // namespace detail

/// Watson-Crick context-free grammar G = (N, T, rho, P, S). Immutable once
/// constructed; all lookup tables and fixpoints are computed up front.
class Grammar {
public:
    Grammar(std::vector<std::string> nonterminal_names, NonTerminal start, Relation relation,
            std::vector<Rule> rules, std::string extra_terminals = {});

    std::size_t nonterminal_count() const noexcept { return names_.size(); }
    const std::string& name(NonTerminal n) const { return names_.at(n.id); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    std::optional<NonTerminal> find(std::string_view name) const
    {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return NonTerminal{it->second};
    }

    NonTerminal start() const noexcept { return start_; }
    const Relation& relation() const noexcept { return relation_; }

    /// Sorted, unique terminal characters (from rules and relation pairs).
    const std::string& terminals() const noexcept { return terminals_; }

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const Rule& rule(std::size_t i) const { return rules_.at(i); }

    /// Indices into rules(), in grammar order.
    std::span<const std::size_t> rules_for(NonTerminal n) const { return by_lhs_.at(n.id); }

    MinCount min_length(NonTerminal n) const { return min_len_.at(n.id); }
    MinCount min_distance(NonTerminal n) const { return min_dist_.at(n.id); }
    std::span<const MinCount> min_lengths() const noexcept { return min_len_; }
    std::span<const MinCount> min_distances() const noexcept { return min_dist_; }

    bool has_lambda_rules() const noexcept { return has_lambda_rules_; }

    /// Structural equality by names (non-terminal numbering may differ).
    friend bool operator==(const Grammar& a, const Grammar& b);

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> index_;
    NonTerminal start_;
    Relation relation_;
    std::string terminals_;
    std::vector<Rule> rules_;
    std::vector<std::vector<std::size_t>> by_lhs_;
    std::vector<MinCount> min_len_;
    std::vector<MinCount> min_dist_;
    bool has_lambda_rules_ = false;
};

/// Least fixpoint of minLen(A) = min over A -> alpha of
/// (terminals in alpha + sum of minLen(B) for B in alpha).
inline std::vector<MinCount> compute_min_lengths(std::size_t nonterminal_count, std::span<const Rule> rules)
{
    std::vector<MinCount> len(nonterminal_count, MinCount::infinite());
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : rules) {
            MinCount v = 0;
            for (const auto& l : r.rhs) {
                if (is_ds(l))
                    v += as_ds(l).size();
                else
                    v += len[as_nonterminal(l).id];
            }
            if (v < len[r.lhs.id]) {
                len[r.lhs.id] = v;
                changed = true;
            }
        }
    }
    return len;
}

/// Least fixpoint of minDist(A) = 1 + min over A -> alpha of
/// sum of minDist(B) for B in alpha.
inline std::vector<MinCount> compute_min_distances(std::size_t nonterminal_count, std::span<const Rule> rules)
{
    std::vector<MinCount> dist(nonterminal_count, MinCount::infinite());
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : rules) {
            MinCount v = 1;
            for (const auto& l : r.rhs)
                if (is_nonterminal(l)) v += dist[as_nonterminal(l).id];
            if (v < dist[r.lhs.id]) {
                dist[r.lhs.id] = v;
                changed = true;
            }
        }
    }
    return dist;
}

inline std::vector<MinCount> compute_min_lengths(const Grammar& g)
{
    return compute_min_lengths(g.nonterminal_count(), g.rules());
}

inline std::vector<MinCount> compute_min_distances(const Grammar& g)
{
    return compute_min_distances(g.nonterminal_count(), g.rules());
}

inline Grammar::Grammar(std::vector<std::string> nonterminal_names, NonTerminal start, Relation relation,
                        std::vector<Rule> rules, std::string extra_terminals)
    : names_(std::move(nonterminal_names)), start_(start), relation_(std::move(relation)), rules_(std::move(rules))
{
    for (std::uint32_t i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second)
            throw grammar_error("duplicate non-terminal name '" + names_[i] + "'");
    }
    if (start_.id >= names_.size()) throw grammar_error("start symbol is not a non-terminal");

    std::set<char> terms(extra_terminals.begin(), extra_terminals.end());
    by_lhs_.resize(names_.size());
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        auto& r = rules_[i];
        if (r.lhs.id >= names_.size()) throw grammar_error("rule left-hand side out of range");
        r.rhs = detail::canonical_letters(r.rhs);
        for (const auto& l : r.rhs) {
            if (is_nonterminal(l)) {
                if (as_nonterminal(l).id >= names_.size())
                    throw grammar_error("rule right-hand side references unknown non-terminal");
            } else {
                for (char c : as_ds(l).upper) terms.insert(c);
                for (char c : as_ds(l).lower) terms.insert(c);
            }
        }
        by_lhs_[r.lhs.id].push_back(i);
        if (r.rhs.size() == 1 && is_ds(r.rhs[0]) && as_ds(r.rhs[0]).empty()) has_lambda_rules_ = true;
    }
    for (auto [a, b] : relation_.pairs()) {
        terms.insert(a);
        terms.insert(b);
    }
    terminals_.assign(terms.begin(), terms.end());
    if (relation_.declared_identity()) relation_ = Relation::identity(terminals_);

    min_len_ = compute_min_lengths(names_.size(), rules_);
    min_dist_ = compute_min_distances(names_.size(), rules_);

    for (auto& r : rules_) {
        r.upper_terminals = r.lower_terminals = 0;
        r.rhs_nt_budget = 0;
        for (const auto& l : r.rhs) {
            if (is_ds(l)) {
                r.upper_terminals += as_ds(l).upper.size();
                r.lower_terminals += as_ds(l).lower.size();
            } else {
                r.rhs_nt_budget += min_len_[as_nonterminal(l).id];
            }
        }
        MinCount lhs_len = min_len_[r.lhs.id];
        if (r.rhs_nt_budget.is_finite() && lhs_len.is_finite()) {
            r.length = static_cast<std::int64_t>(r.upper_terminals + r.lower_terminals + r.rhs_nt_budget.value()) -
                       static_cast<std::int64_t>(lhs_len.value());
        } else {
            r.length.reset();
        }
    }
}

namespace detail {

// Rule rendered with names, used for name-based comparisons.
inline std::string rule_key(const Grammar& g, const Rule& r)
{
    std::string s = g.name(r.lhs) + " ->";
    for (const auto& l : r.rhs) {
        s += ' ';
        if (is_nonterminal(l))
            s += g.name(as_nonterminal(l));
        else
            s += '[' + as_ds(l).upper + '/' + as_ds(l).lower + ']';
    }
    return s;
}

}  // namespace detail

inline bool operator==(const Grammar& a, const Grammar& b)
{
    if (a.name(a.start()) != b.name(b.start())) return false;
    if (!(a.relation() == b.relation())) return false;
    if (a.rules().size() != b.rules().size()) return false;
    // Alternatives are ordered per left-hand side; interleaving across
    // different left-hand sides is not significant.
    auto grouped = [](const Grammar& g) {
        std::map<std::string, std::vector<std::string>> m;
        for (const auto& r : g.rules()) m[g.name(r.lhs)].push_back(detail::rule_key(g, r));
        return m;
    };
    if (grouped(a) != grouped(b)) return false;
    std::set<std::string> na(a.names().begin(), a.names().end()), nb(b.names().begin(), b.names().end());
    return na == nb;
}

/// Sentential form in canonical merged form: adjacent DS-strings merged,
/// empty DS-strings dropped unless the whole word is the lambda letter.
class WkWord {
public:
    /// The lambda word [(λ/λ)].
    WkWord() : letters_{DsString{}} {}

    const std::vector<Letter>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    const Letter& operator[](std::size_t i) const { return letters_.at(i); }

    std::size_t upper_length() const noexcept { return upper_len_; }
    std::size_t lower_length() const noexcept { return lower_len_; }

    /// Sum of minimum terminal lengths of the contained non-terminals.
    MinCount nt_budget() const noexcept { return nt_budget_; }

    /// upper + lower + non-terminal budget; the quantity bounded by TL.
    MinCount total_length() const noexcept { return MinCount(upper_len_ + lower_len_) + nt_budget_; }

    bool is_lambda() const noexcept { return letters_.size() == 1 && is_ds(letters_[0]) && as_ds(letters_[0]).empty(); }

    friend bool operator==(const WkWord& a, const WkWord& b) { return a.letters_ == b.letters_; }

    friend WkWord canonicalize(std::span<const Letter> letters, const Grammar& g);
    friend WkWord apply_rule(const WkWord& word, std::size_t position, const Rule& rule, const Grammar& g);
    friend WkWord decode_word(std::string_view key, const Grammar& g);

private:
    void recount(const Grammar& g)
    {
        upper_len_ = lower_len_ = 0;
        nt_budget_ = 0;
        for (const auto& l : letters_) {
            if (is_ds(l)) {
                upper_len_ += as_ds(l).upper.size();
                lower_len_ += as_ds(l).lower.size();
            } else {
                nt_budget_ += g.min_length(as_nonterminal(l));
            }
        }
    }

    std::vector<Letter> letters_;
    std::size_t upper_len_ = 0;
    std::size_t lower_len_ = 0;
    MinCount nt_budget_;
};

inline WkWord canonicalize(std::span<const Letter> letters, const Grammar& g)
{
    WkWord w;
    w.letters_ = detail::canonical_letters(letters);
    w.recount(g);
    return w;
}

inline WkWord canonicalize(std::initializer_list<Letter> letters, const Grammar& g)
{
    return canonicalize(std::span<const Letter>(letters.begin(), letters.size()), g);
}

/// Replaces the non-terminal at `position` by the rule's right-hand side.
/// Length bookkeeping is incremental: total_length grows by rule.length.
inline WkWord apply_rule(const WkWord& word, std::size_t position, const Rule& rule, const Grammar& g)
{
    if (position >= word.letters_.size()) throw std::out_of_range("apply_rule: position out of range");
    const Letter& target = word.letters_[position];
    if (!is_nonterminal(target) || as_nonterminal(target) != rule.lhs)
        throw std::invalid_argument("apply_rule: letter at position is not the rule's left-hand side");

    WkWord out;
    out.letters_.clear();
    out.letters_.reserve(word.letters_.size() + rule.rhs.size());
    for (std::size_t i = 0; i < position; ++i) out.letters_.push_back(word.letters_[i]);
    for (const auto& l : rule.rhs) detail::append_canonical(out.letters_, l);
    for (std::size_t i = position + 1; i < word.letters_.size(); ++i)
        detail::append_canonical(out.letters_, word.letters_[i]);
    detail::finish_canonical(out.letters_);

    out.upper_len_ = word.upper_len_ + rule.upper_terminals;
    out.lower_len_ = word.lower_len_ + rule.lower_terminals;
    if (word.nt_budget_.is_finite()) {
        // lhs is part of word, so its length is finite and already included.
        out.nt_budget_ = MinCount(word.nt_budget_.value() - g.min_length(rule.lhs).value()) + rule.rhs_nt_budget;
    } else {
        out.nt_budget_ = 0;
        for (const auto& l : out.letters_)
            if (is_nonterminal(l)) out.nt_budget_ += g.min_length(as_nonterminal(l));
    }
    return out;
}

inline std::optional<std::size_t> leftmost_nonterminal(const WkWord& word) noexcept
{
    const auto& ls = word.letters();
    for (std::size_t i = 0; i < ls.size(); ++i)
        if (is_nonterminal(ls[i])) return i;
    return std::nullopt;
}

/// A terminal word is a solution iff it is a single DS letter whose strands
/// have equal length, are pairwise related and whose upper strand is input.
inline bool is_solution(const WkWord& word, std::string_view input, const Relation& relation)
{
    if (word.size() != 1 || !is_ds(word[0])) return false;
    const auto& ds = as_ds(word[0]);
    if (ds.upper.size() != ds.lower.size()) return false;
    if (ds.upper != input) return false;
    for (std::size_t i = 0; i < ds.upper.size(); ++i)
        if (!relation.contains(ds.upper[i], ds.lower[i])) return false;
    return true;
}

inline std::string to_string(const Letter& l, const Grammar& g)
{
    if (is_nonterminal(l)) return g.name(as_nonterminal(l));
    const auto& ds = as_ds(l);
    std::string s;
    s.reserve(ds.size() + 3);
    s += '[';
    s += ds.upper;
    s += '/';
    s += ds.lower;
    s += ']';
    return s;
}

/// Canonical serialization: letters joined by single spaces, DS letters as
/// [upper/lower].
inline std::string to_string(const WkWord& word, const Grammar& g)
{
    std::string s;
    for (const auto& l : word.letters()) {
        if (!s.empty()) s += ' ';
        s += to_string(l, g);
    }
    return s;
}

// Compact binary form of a canonical word, one-to-one with to_string for a
// fixed grammar. Layout per letter:
//   non-terminal id < 127   0x80 + id
//   larger id               0xff, then LEB128 of the id
//   DS letter               0x02 upper 0x03 lower
// Terminals are printable ASCII, so the markers cannot collide with them.
inline void encode_word(const WkWord& word, std::string& out)
{
    out.clear();
    for (const auto& l : word.letters()) {
        if (is_nonterminal(l)) {
            auto id = as_nonterminal(l).id;
            if (id < 127) {
                out += static_cast<char>(0x80 + id);
            } else {
                out += static_cast<char>(0xff);
                do {
                    auto b = static_cast<unsigned char>(id & 0x7f);
                    id >>= 7;
                    out += static_cast<char>(id ? (b | 0x80) : b);
                } while (id);
            }
        } else {
            out += '\x02';
            out += as_ds(l).upper;
            out += '\x03';
            out += as_ds(l).lower;
        }
    }
}

inline std::string encode_word(const WkWord& word)
{
    std::string out;
    encode_word(word, out);
    return out;
}

inline WkWord decode_word(std::string_view key, const Grammar& g)
{
    WkWord w;
    auto& letters = w.letters_;
    letters.clear();
    letters.reserve(key.size());
    std::size_t i = 0;
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(key[k]); };
    while (i < key.size()) {
        auto b = byte(i);
        if (b == 0x02) {
            auto mid = key.find('\x03', i + 1);
            auto end = mid + 1;
            while (end < key.size() && byte(end) != 0x02 && byte(end) < 0x80) ++end;
            letters.emplace_back(DsString{std::string(key.substr(i + 1, mid - i - 1)),
                                          std::string(key.substr(mid + 1, end - mid - 1))});
            i = end;
        } else if (b == 0xff) {
            std::uint32_t id = 0;
            unsigned shift = 0;
            ++i;
            while (true) {
                auto v = byte(i++);
                id |= static_cast<std::uint32_t>(v & 0x7f) << shift;
                shift += 7;
                if (!(v & 0x80)) break;
            }
            letters.emplace_back(NonTerminal{id});
        } else if (b >= 0x80) {
            letters.emplace_back(NonTerminal{static_cast<std::uint32_t>(b - 0x80)});
            ++i;
        } else {
            throw std::invalid_argument("decode_word: malformed key");
        }
    }
    // Keys are produced from canonical words only.
    if (letters.empty()) throw std::invalid_argument("decode_word: malformed key");
    w.recount(g);
    return w;
}

// ---------------------------------------------------------------------------
// Validation

enum class Severity { warning, error };

struct Diagnostic {
    Severity severity;
    std::string message;
};

struct Diagnostics {
    std::vector<Diagnostic> items;

    bool has_errors() const
    {
        return std::any_of(items.begin(), items.end(), [](const Diagnostic& d) { return d.severity == Severity::error; });
    }
    bool empty() const noexcept { return items.empty(); }
    void error(std::string m) { items.push_back({Severity::error, std::move(m)}); }
    void warning(std::string m) { items.push_back({Severity::warning, std::move(m)}); }
};

inline Diagnostics validate(const Grammar& g)
{
    Diagnostics d;

    for (char t : g.terminals())
        if (!is_valid_terminal(t)) d.error(std::string("invalid terminal symbol '") + t + "'");

    for (auto [a, b] : g.relation().asymmetric_pairs())
        d.error(std::string("relation not symmetric: (") + a + "," + b + ") without (" + b + "," + a + ")");

    std::vector<bool> referenced(g.nonterminal_count(), false);
    for (const auto& r : g.rules())
        for (const auto& l : r.rhs)
            if (is_nonterminal(l)) referenced[as_nonterminal(l).id] = true;
    for (std::uint32_t i = 0; i < g.nonterminal_count(); ++i) {
        if (g.rules_for(NonTerminal{i}).empty() && (referenced[i] || NonTerminal{i} == g.start()))
            d.error("undeclared non-terminal " + g.name(NonTerminal{i}) + " (no rules)");
    }

    for (std::uint32_t i = 0; i < g.nonterminal_count(); ++i)
        if (!g.rules_for(NonTerminal{i}).empty() && g.min_length(NonTerminal{i}).is_infinite())
            d.warning("unproductive non-terminal " + g.name(NonTerminal{i}));

    std::vector<bool> reach(g.nonterminal_count(), false);
    std::vector<std::uint32_t> stack{g.start().id};
    reach[g.start().id] = true;
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        for (auto ri : g.rules_for(NonTerminal{n}))
            for (const auto& l : g.rule(ri).rhs)
                if (is_nonterminal(l) && !reach[as_nonterminal(l).id]) {
                    reach[as_nonterminal(l).id] = true;
                    stack.push_back(as_nonterminal(l).id);
                }
    }
    for (std::uint32_t i = 0; i < g.nonterminal_count(); ++i)
        if (!reach[i]) d.warning("unreachable non-terminal " + g.name(NonTerminal{i}));

    std::set<std::string> seen;
    for (const auto& r : g.rules()) {
        auto key = detail::rule_key(g, r);
        if (!seen.insert(key).second) d.warning("duplicate rule " + key);
    }
    return d;
}

}  // namespace wkgram

#endif  // WKGRAM_CORE_HPP
