#ifndef WKGRAM_CYK_HPP
#define WKGRAM_CYK_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cnf.hpp"
#include "core.hpp"

namespace wkgram {

/// Set of non-terminals as a bitset over the grammar's non-terminal ids.
class NtSet {
public:
    NtSet() = default;
    explicit NtSet(std::size_t nonterminal_count) : bits_((nonterminal_count + 63) / 64, 0) {}
    explicit NtSet(std::span<const std::uint64_t> words) : bits_(words.begin(), words.end()) {}

    void insert(NonTerminal n) { bits_.at(n.id / 64) |= std::uint64_t{1} << (n.id % 64); }
    bool contains(NonTerminal n) const
    {
        return n.id / 64 < bits_.size() && ((bits_[n.id / 64] >> (n.id % 64)) & 1u);
    }
    bool empty() const
    {
        return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t w) { return w == 0; });
    }
    std::size_t size() const
    {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }
    NtSet& operator|=(const NtSet& o)
    {
        for (std::size_t i = 0; i < bits_.size() && i < o.bits_.size(); ++i) bits_[i] |= o.bits_[i];
        return *this;
    }

    std::span<const std::uint64_t> words() const noexcept { return bits_; }
    std::span<std::uint64_t> words() noexcept { return bits_; }

    friend bool operator==(const NtSet&, const NtSet&) = default;

private:
    std::vector<std::uint64_t> bits_;
};

/// Upper interval [i, j] and lower interval [k, l], 1-based and inclusive;
/// (0, 0) denotes an empty strand.
struct SegmentKey {
    std::int64_t i = 0, j = 0, k = 0, l = 0;

    std::int64_t upper_length() const noexcept { return i == 0 ? 0 : j - i + 1; }
    std::int64_t lower_length() const noexcept { return k == 0 ? 0 : l - k + 1; }
    std::int64_t length() const noexcept { return upper_length() + lower_length(); }

    bool valid(std::int64_t n) const noexcept
    {
        auto ok = [n](std::int64_t a, std::int64_t b) {
            return (a == 0 && b == 0) || (a >= 1 && a <= b && b <= n);
        };
        return ok(i, j) && ok(k, l) && (i != 0 || k != 0);
    }

    std::uint64_t packed() const noexcept
    {
        return (static_cast<std::uint64_t>(i) << 48) | (static_cast<std::uint64_t>(j) << 32) |
               (static_cast<std::uint64_t>(k) << 16) | static_cast<std::uint64_t>(l);
    }

    friend bool operator==(const SegmentKey&, const SegmentKey&) = default;
};

/// Rule lookup tables for WK-CYK: binary rules keyed by (B, C) and terminal
/// rules keyed by their single symbol.
class RulePairIndex {
public:
    struct PairEntry {
        NonTerminal left;
        NonTerminal right;
        NtSet lhs;
    };

    explicit RulePairIndex(const Grammar& g)
        : nonterminals_(g.nonterminal_count()), by_upper_(256, NtSet(g.nonterminal_count())),
          by_lower_(256, NtSet(g.nonterminal_count()))
    {
        std::unordered_map<std::uint64_t, std::size_t> slot;
        for (const auto& r : g.rules()) {
            if (r.rhs.size() == 2 && is_nonterminal(r.rhs[0]) && is_nonterminal(r.rhs[1])) {
                auto b = as_nonterminal(r.rhs[0]), c = as_nonterminal(r.rhs[1]);
                auto key = (static_cast<std::uint64_t>(b.id) << 32) | c.id;
                auto [it, fresh] = slot.emplace(key, pairs_.size());
                if (fresh) pairs_.push_back({b, c, NtSet(nonterminals_)});
                pairs_[it->second].lhs.insert(r.lhs);
            } else if (r.rhs.size() == 1 && is_ds(r.rhs[0]) && as_ds(r.rhs[0]).size() == 1) {
                const auto& ds = as_ds(r.rhs[0]);
                if (!ds.upper.empty())
                    by_upper_[static_cast<unsigned char>(ds.upper[0])].insert(r.lhs);
                else
                    by_lower_[static_cast<unsigned char>(ds.lower[0])].insert(r.lhs);
            }
        }
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            auto key = (static_cast<std::uint64_t>(pairs_[p].left.id) << 32) | pairs_[p].right.id;
            by_pair_.emplace(key, p);
        }
    }

    std::size_t nonterminal_count() const noexcept { return nonterminals_; }
    std::size_t words() const noexcept { return (nonterminals_ + 63) / 64; }
    const std::vector<PairEntry>& pairs() const noexcept { return pairs_; }

    /// {A | A -> BC}.
    NtSet by_pair(NonTerminal b, NonTerminal c) const
    {
        auto it = by_pair_.find((static_cast<std::uint64_t>(b.id) << 32) | c.id);
        return it == by_pair_.end() ? NtSet(nonterminals_) : pairs_[it->second].lhs;
    }
    const NtSet& by_upper_terminal(char a) const { return by_upper_[static_cast<unsigned char>(a)]; }
    const NtSet& by_lower_terminal(char a) const { return by_lower_[static_cast<unsigned char>(a)]; }

private:
    std::size_t nonterminals_;
    std::vector<PairEntry> pairs_;
    std::unordered_map<std::uint64_t, std::size_t> by_pair_;
    std::vector<NtSet> by_upper_;
    std::vector<NtSet> by_lower_;
};

namespace detail {

inline bool test_bit(std::span<const std::uint64_t> s, std::uint32_t id)
{
    return (s[id / 64] >> (id % 64)) & 1u;
}

inline bool all_zero(std::span<const std::uint64_t> s)
{
    return std::all_of(s.begin(), s.end(), [](std::uint64_t w) { return w == 0; });
}

// out |= {A | A -> BC, B in left, C in right}
inline void product_into(std::span<const std::uint64_t> left, std::span<const std::uint64_t> right,
                         const RulePairIndex& index, std::span<std::uint64_t> out)
{
    for (const auto& p : index.pairs()) {
        if (test_bit(left, p.left.id) && test_bit(right, p.right.id)) {
            auto lhs = p.lhs.words();
            for (std::size_t w = 0; w < out.size(); ++w) out[w] |= lhs[w];
        }
    }
}

}  // namespace detail

/// {A | A -> BC in P, B in left, C in right}; iterates the rule pair index.
inline NtSet set_product(const NtSet& left, const NtSet& right, const RulePairIndex& index)
{
    NtSet out(index.nonterminal_count());
    if (left.empty() || right.empty()) return out;
    detail::product_into(left.words(), right.words(), index, out.words());
    return out;
}

/// Lazily allocated family of sets X_{i,j,k,l}.
class XTable {
public:
    /// Default cap on dense storage in words; past it entries live in a hash map.
    static constexpr std::size_t default_dense_words = std::size_t{1} << 25;

    XTable(std::size_t n, std::size_t words_per_set, std::size_t dense_words = default_dense_words)
        : n_(n), words_(words_per_set), intervals_(1 + n * (n + 1) / 2)
    {
        const auto slots = intervals_ * intervals_;
        if (words_ > 0 && slots <= dense_words / words_) {
            dense_ = true;
            written_.assign(slots, 0);
            pool_.assign(slots * words_, 0);
        }
    }

    std::size_t input_length() const noexcept { return n_; }
    std::size_t words_per_set() const noexcept { return words_; }
    std::size_t size() const noexcept { return dense_ ? count_ : offsets_.size(); }
    bool dense() const noexcept { return dense_; }

    bool contains(const SegmentKey& key) const { return find(key) != nullptr; }

    /// Null when the entry has not been written.
    const std::uint64_t* find(const SegmentKey& key) const
    {
        if (dense_) {
            if (!key.valid(static_cast<std::int64_t>(n_))) return nullptr;
            auto slot = slot_of(key);
            return written_[slot] ? pool_.data() + slot * words_ : nullptr;
        }
        auto it = offsets_.find(key.packed());
        return it == offsets_.end() ? nullptr : pool_.data() + it->second;
    }

    std::span<const std::uint64_t> get(const SegmentKey& key) const
    {
        const auto* p = find(key);
        if (!p) throw std::logic_error("WK-CYK ordering violation: missing prerequisite segment");
        return {p, words_};
    }

    NtSet set(const SegmentKey& key) const { return NtSet(get(key)); }

    void put(const SegmentKey& key, std::span<const std::uint64_t> value)
    {
        if (key.length() < max_length_)
            throw std::logic_error("WK-CYK ordering violation: segment written after a longer one");
        if (!key.valid(static_cast<std::int64_t>(n_))) throw std::logic_error("XTable: invalid segment key");
        max_length_ = key.length();
        std::size_t offset;
        if (dense_) {
            auto slot = slot_of(key);
            if (!written_[slot]) {
                written_[slot] = 1;
                ++count_;
            }
            offset = slot * words_;
        } else {
            auto [it, fresh] = offsets_.emplace(key.packed(), pool_.size());
            if (fresh) pool_.resize(pool_.size() + words_);
            offset = it->second;
        }
        std::copy(value.begin(), value.end(), pool_.begin() + static_cast<std::ptrdiff_t>(offset));
    }

private:
    // Interval [a, b] with 1 <= a <= b <= n maps to 1.., the empty interval to 0.
    std::size_t interval(std::int64_t a, std::int64_t b) const noexcept
    {
        if (a == 0) return 0;
        const auto n = static_cast<std::int64_t>(n_);
        return static_cast<std::size_t>(1 + (a - 1) * n - (a - 1) * (a - 2) / 2 + (b - a));
    }
    std::size_t slot_of(const SegmentKey& key) const noexcept
    {
        return interval(key.i, key.j) * intervals_ + interval(key.k, key.l);
    }

    std::size_t n_;
    std::size_t words_;
    std::size_t intervals_;
    std::int64_t max_length_ = 0;
    bool dense_ = false;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> written_;
    std::unordered_map<std::uint64_t, std::size_t> offsets_;
    std::vector<std::uint64_t> pool_;
};

namespace detail {

class SetComputer {
public:
    SetComputer(const XTable& table, const RulePairIndex& index, bool lenient)
        : table_(table), index_(index), lenient_(lenient), empty_(index.words(), 0)
    {
    }

    void run(const SegmentKey& key, std::span<std::uint64_t> out)
    {
        std::fill(out.begin(), out.end(), 0);
        if (!key.valid(static_cast<std::int64_t>(table_.input_length()))) {
            if (!lenient_) throw std::logic_error("compute_set: invalid segment key");
            return;
        }
        const auto i = key.i, j = key.j, k = key.k, l = key.l;
        if (i == 0) {
            for (auto t = k; t <= l - 1; ++t) mul({0, 0, k, t}, {0, 0, t + 1, l}, out);
        } else if (k == 0) {
            for (auto s = i; s <= j - 1; ++s) mul({i, s, 0, 0}, {s + 1, j, 0, 0}, out);
        } else {
            mul({i, j, 0, 0}, {0, 0, k, l}, out);
            mul({0, 0, k, l}, {i, j, 0, 0}, out);
            for (auto s = i; s <= j - 1; ++s)
                for (auto t = k; t <= l - 1; ++t) mul({i, s, k, t}, {s + 1, j, t + 1, l}, out);
            for (auto s = i; s <= j - 1; ++s) {
                mul({i, s, k, l}, {s + 1, j, 0, 0}, out);
                mul({i, s, 0, 0}, {s + 1, j, k, l}, out);
            }
            for (auto t = k; t <= l - 1; ++t) {
                mul({i, j, k, t}, {0, 0, t + 1, l}, out);
                mul({0, 0, k, t}, {i, j, t + 1, l}, out);
            }
        }
    }

private:
    std::span<const std::uint64_t> lookup(const SegmentKey& key) const
    {
        if (lenient_) {
            const auto* p = table_.find(key);
            return p ? std::span<const std::uint64_t>(p, index_.words()) : std::span<const std::uint64_t>(empty_);
        }
        return table_.get(key);
    }

    void mul(const SegmentKey& a, const SegmentKey& b, std::span<std::uint64_t> out) const
    {
        auto left = lookup(a);
        if (all_zero(left)) return;
        auto right = lookup(b);
        if (all_zero(right)) return;
        product_into(left, right, index_, out);
    }

    const XTable& table_;
    const RulePairIndex& index_;
    bool lenient_;
    std::vector<std::uint64_t> empty_;
};

}  // namespace detail

/// Computes X for one segment from strictly shorter entries of the table.
/// Throws std::logic_error when a prerequisite entry is missing.
inline NtSet compute_set(const SegmentKey& key, const XTable& table, const RulePairIndex& index)
{
    NtSet out(index.nonterminal_count());
    detail::SetComputer(table, index, false).run(key, out.words());
    return out;
}

enum class BetaBounds {
    corrected,  ///< beta in [max(y - n, 0), min(n, y)]
    naive,      ///< beta in [0, n], nonsense segments yield nothing
};

struct CykStats {
    std::uint64_t compute_set_calls = 0;
    std::uint64_t beta_iterations = 0;
    std::size_t table_entries = 0;
};

struct CykResult {
    bool accepted = false;
    bool timed_out = false;  ///< deadline passed; `accepted` is meaningless
    CykStats stats;
};

inline void require_cyk_grammar(const Grammar& g)
{
    if (!g.relation().is_identity_on(g.terminals()))
        throw precondition_error("WK-CYK requires the complementarity relation to be the identity");
    if (!is_wk_cnf(g)) throw precondition_error("WK-CYK requires a grammar in WK Chomsky normal form");
}

/// WK-CYK membership test. The grammar must be in WK-CNF with the identity
/// relation; otherwise precondition_error is thrown. The optional deadline
/// is polled once per (y, beta) step.
inline CykResult decide_cyk(const Grammar& g, std::string_view input, BetaBounds bounds = BetaBounds::corrected,
                            std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt)
{
    require_cyk_grammar(g);
    CykResult result;
    const auto n = static_cast<std::int64_t>(input.size());
    if (n == 0) {
        for (auto ri : g.rules_for(g.start()))
            if (detail::is_lambda_rhs(g.rule(ri).rhs)) result.accepted = true;
        return result;
    }

    RulePairIndex index(g);
    XTable table(input.size(), index.words());
    for (std::int64_t i = 1; i <= n; ++i) {
        table.put({i, i, 0, 0}, index.by_upper_terminal(input[static_cast<std::size_t>(i - 1)]).words());
    }
    for (std::int64_t i = 1; i <= n; ++i) {
        table.put({0, 0, i, i}, index.by_lower_terminal(input[static_cast<std::size_t>(i - 1)]).words());
    }

    const bool lenient = bounds == BetaBounds::naive;
    detail::SetComputer computer(table, index, lenient);
    std::vector<std::uint64_t> buf(index.words());
    auto compute = [&](SegmentKey key) {
        ++result.stats.compute_set_calls;
        computer.run(key, buf);
        if (key.valid(n)) table.put(key, buf);
    };

    for (std::int64_t y = 2; y <= 2 * n; ++y) {
        const std::int64_t lo = bounds == BetaBounds::corrected ? std::max<std::int64_t>(y - n, 0) : 0;
        const std::int64_t hi = bounds == BetaBounds::corrected ? std::min<std::int64_t>(n, y) : n;
        for (std::int64_t beta = lo; beta <= hi; ++beta) {
            if (deadline && std::chrono::steady_clock::now() >= *deadline) {
                result.timed_out = true;
                result.stats.table_entries = table.size();
                return result;
            }
            ++result.stats.beta_iterations;
            const std::int64_t alpha = y - beta;
            if (alpha == 0) {
                for (std::int64_t k = 1; k <= n - y + 1; ++k) compute({0, 0, k, k + y - 1});
            } else if (beta == 0) {
                for (std::int64_t i = 1; i <= n - y + 1; ++i) compute({i, i + y - 1, 0, 0});
            } else {
                for (std::int64_t i = 1; i <= n - alpha + 1; ++i)
                    for (std::int64_t k = 1; k <= n - beta + 1; ++k) compute({i, i + alpha - 1, k, k + beta - 1});
            }
        }
    }

    result.stats.table_entries = table.size();
    const auto* full = table.find({1, n, 1, n});
    result.accepted = full && detail::test_bit({full, index.words()}, g.start().id);
    return result;
}

}  // namespace wkgram

#endif  // WKGRAM_CYK_HPP
