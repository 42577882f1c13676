#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace wkgram;
using namespace testing_support;

namespace {

const char* kLetters = R"(start: S
relation: identity
S -> A B C | N
A -> [a/a] | [/a]
B -> [b/b]
C -> [c/c]
N -> [x/x]
N1 -> [f/f]
N2 -> [g/g]
N3 -> [h/h]
)";

std::span<const MinCount> no_distances(const Grammar& g) { return g.min_distances(); }

}  // namespace

TEST(PruneSl, Examples)
{
    auto g = grammar(kLetters);
    EXPECT_EQ(prune_sl(word(g, "[aaa/]"), 2), PruneVerdict::prune);
    EXPECT_EQ(prune_sl(word(g, "[/aaa]"), 2), PruneVerdict::prune);
    EXPECT_EQ(prune_sl(word(g, "[aa/aa]"), 2), PruneVerdict::keep);
    EXPECT_EQ(prune_sl(word(g, "A"), 0), PruneVerdict::keep);
}

TEST(PruneTl, Examples)
{
    auto g = grammar(kLetters);
    // 3 + 3 + minLen(A) + minLen(B) + minLen(C) = 6 + 1 + 2 + 2 = 11
    auto w = word(g, "[abc/abc] A B C");
    EXPECT_EQ(w.total_length(), MinCount(11));
    EXPECT_EQ(prune_tl(w, 5), PruneVerdict::prune);
    EXPECT_EQ(prune_tl(w, 6), PruneVerdict::keep);
    // upper 3, lower 3, budget 3 against |input| = 4: 9 > 8.
    auto nine = word(g, "[abc/ab] B [/a] A");
    ASSERT_EQ(nine.upper_length(), 3u);
    ASSERT_EQ(nine.lower_length(), 3u);
    ASSERT_EQ(nine.nt_budget(), MinCount(3));
    EXPECT_EQ(prune_tl(nine, 4), PruneVerdict::prune);

    const auto& g1 = corpus::load(1, corpus::Form::basic);
    EXPECT_EQ(prune_tl(word(g1, "S"), 1), PruneVerdict::keep);
}

TEST(PruneWs, Examples)
{
    auto g = grammar(kLetters);
    EXPECT_EQ(prune_ws(word(g, "[ab/x] A"), "abc"), PruneVerdict::keep);
    EXPECT_EQ(prune_ws(word(g, "[ba/x] A"), "abc"), PruneVerdict::prune);
    EXPECT_EQ(prune_ws(word(g, "A [zz/z]"), "abc"), PruneVerdict::keep);
    EXPECT_EQ(prune_ws(word(g, "[/x] A"), "abc"), PruneVerdict::keep);
}

TEST(PruneRl, Examples)
{
    auto g = grammar(kLetters);
    auto id = Relation::identity("abcx");
    EXPECT_EQ(prune_rl(word(g, "[ab/ac] N"), id), PruneVerdict::prune);
    EXPECT_EQ(prune_rl(word(g, "[ab/a] N"), id), PruneVerdict::keep);
    EXPECT_EQ(prune_rl(word(g, "N [ab/ac]"), id), PruneVerdict::keep);
    const auto& g5 = corpus::load(5, corpus::Form::basic);
    auto w = canonicalize({Letter{DsString{"at", "ta"}}, Letter{g5.start()}}, g5);
    EXPECT_EQ(prune_rl(w, g5.relation()), PruneVerdict::keep);
    auto bad = canonicalize({Letter{DsString{"at", "at"}}, Letter{g5.start()}}, g5);
    EXPECT_EQ(prune_rl(bad, g5.relation()), PruneVerdict::prune);
}

TEST(BuildPattern, Examples)
{
    auto g = grammar(kLetters);
    auto p = build_pattern(word(g, "[abc/f] N1 [d/gh] N2 [e/i] N3"));
    EXPECT_TRUE(p.anchored_start);
    EXPECT_FALSE(p.anchored_end);
    EXPECT_EQ(p.segments, (std::vector<std::string>{"abc", "d", "e"}));

    auto q = build_pattern(word(g, "N"));
    EXPECT_FALSE(q.anchored_start);
    EXPECT_FALSE(q.anchored_end);
    EXPECT_TRUE(q.segments.empty());

    auto r = build_pattern(word(g, "[ab/ab]"));
    EXPECT_TRUE(r.anchored_start);
    EXPECT_TRUE(r.anchored_end);
    EXPECT_EQ(r.segments, (std::vector<std::string>{"ab"}));

    auto gaps = build_pattern(word(g, "A B [x/] C N"));
    EXPECT_FALSE(gaps.anchored_start);
    EXPECT_EQ(gaps.segments, (std::vector<std::string>{"x"}));
}

TEST(PatternMatches, Examples)
{
    auto g = grammar(kLetters);
    auto p = build_pattern(word(g, "[abc/f] N1 [d/gh] N2 [e/i] N3"));
    EXPECT_TRUE(pattern_matches(p, "abcxdye"));
    EXPECT_FALSE(pattern_matches(p, "abdxcye"));
    EXPECT_TRUE(pattern_matches(MatchPattern{}, "anything"));
    EXPECT_TRUE(pattern_matches(MatchPattern{}, ""));
}

TEST(PatternMatches, AnchoredEndNeedsRoomAfterInterior)
{
    MatchPattern p{false, true, {"ab", "ba"}};
    EXPECT_TRUE(pattern_matches(p, "abba"));
    EXPECT_FALSE(pattern_matches(p, "aba"));
    MatchPattern both{true, true, {"ab", "ab"}};
    EXPECT_FALSE(pattern_matches(both, "ab"));
    EXPECT_TRUE(pattern_matches(both, "abab"));
    MatchPattern whole{true, true, {"ab"}};
    EXPECT_FALSE(pattern_matches(whole, "abab"));
}

TEST(PatternMatches, AgreesWithBacktrackingPlacement)
{
    // Exhaustive check of greedy placement against a backtracking matcher.
    std::function<bool(const MatchPattern&, std::string_view, std::size_t, std::size_t)> place =
        [&](const MatchPattern& p, std::string_view in, std::size_t seg, std::size_t pos) -> bool {
        if (seg == p.segments.size()) return !p.anchored_end || pos == in.size() || p.segments.empty();
        const auto& s = p.segments[seg];
        for (std::size_t at = pos; at + s.size() <= in.size(); ++at) {
            if (seg == 0 && p.anchored_start && at != 0) break;
            if (in.substr(at, s.size()) != s) continue;
            bool last = seg + 1 == p.segments.size();
            if (last && p.anchored_end && at + s.size() != in.size()) continue;
            if (place(p, in, seg + 1, at + s.size())) return true;
        }
        return false;
    };
    auto pieces = all_strings("ab", 2);
    auto inputs = all_strings("ab", 6);
    std::size_t checked = 0;
    for (bool as : {false, true})
        for (bool ae : {false, true})
            for (const auto& s1 : pieces)
                for (const auto& s2 : pieces) {
                    if (s1.empty() || s2.empty()) continue;
                    MatchPattern p{as, ae, {s1, s2}};
                    for (const auto& in : inputs) {
                        EXPECT_EQ(pattern_matches(p, in), place(p, in, 0, 0)) << as << ae << s1 << "," << s2 << " " << in;
                        ++checked;
                    }
                }
    EXPECT_GT(checked, 1000u);
}

TEST(Evaluate, Examples)
{
    auto g = grammar(kLetters);
    auto dist = no_distances(g);
    EXPECT_EQ(evaluate(word(g, "A B C"), PrecedenceKind::nta, "abc", dist), 3);
    EXPECT_EQ(evaluate(word(g, "A B C"), PrecedenceKind::none, "abc", dist), 0);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N"), PrecedenceKind::tm1, "abc", dist), -2);
    EXPECT_EQ(evaluate(word(g, "[ba/x] N"), PrecedenceKind::tm2, "abc", dist), 2);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N [c/]"), PrecedenceKind::tm2, "abc", dist), -3);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N [d/]"), PrecedenceKind::tm2, "abc", dist), -1);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N [c/]"), PrecedenceKind::tm1, "abc", dist), -3);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N [c/]"), PrecedenceKind::tm3, "abc", dist), -2);
    EXPECT_EQ(evaluate(word(g, "N [ab/]"), PrecedenceKind::tm3, "abc", dist), 0);
    EXPECT_EQ(evaluate(word(g, "[ab/x] N"), PrecedenceKind::nta_tm1, "abc", dist), -1);
}

TEST(Evaluate, WeightedAversionUsesDistances)
{
    auto g = grammar(kLetters);
    auto dist = g.min_distances();
    // minDist: A, B, C, N = 1; S = 2 (S -> N -> [x/x]).
    EXPECT_EQ(evaluate(word(g, "A B C"), PrecedenceKind::wnta, "", dist), 3);
    EXPECT_EQ(evaluate(word(g, "S S"), PrecedenceKind::wnta, "", dist), 4);
    auto g1 = grammar("start: S\nrelation: identity\nS -> A\nA -> B\nB -> [a/a]\n");
    EXPECT_EQ(evaluate(word(g1, "S [a/a] B"), PrecedenceKind::wnta, "a", g1.min_distances()), 4);
    EXPECT_EQ(evaluate(word(g1, "S [a/a] B"), PrecedenceKind::wnta_tm1, "a", g1.min_distances()), 3);
}

TEST(Expand, Grammar1)
{
    const auto& g1 = corpus::load(1, corpus::Form::basic);
    auto succ = expand(word(g1, "S"), g1);
    ASSERT_EQ(succ.size(), 2u);
    EXPECT_EQ(to_string(succ[0].word, g1), "[a/a]");
    EXPECT_EQ(to_string(succ[1].word, g1), "S S S");
}

TEST(Expand, LeftmostOnly)
{
    auto g = grammar(kLetters);
    auto succ = expand(word(g, "A B C"), g);
    ASSERT_EQ(succ.size(), 2u);
    EXPECT_EQ(to_string(succ[0].word, g), "[a/a] B C");
    EXPECT_EQ(to_string(succ[1].word, g), "[/a] B C");
    EXPECT_THROW(expand(word(g, "[a/a]"), g), std::invalid_argument);
}

TEST(Search, Grammar1Examples)
{
    const auto& g1 = corpus::load(1, corpus::Form::basic);
    auto yes = search(g1, "aaa", PruneConfig::all(), PrecedenceKind::nta_tm1, SearchBudget::seconds(10));
    EXPECT_EQ(yes.decision, Decision::accepted);
    auto no = search(g1, "aa", PruneConfig::all(), PrecedenceKind::nta_tm1, SearchBudget::seconds(10));
    EXPECT_EQ(no.decision, Decision::rejected);
    EXPECT_LT(no.stats.expanded, 100u);
    EXPECT_FALSE(no.stats.timed_out);
}

TEST(Search, Grammar3QuickRejection)
{
    const auto& g3 = corpus::load(3, corpus::Form::basic);
    for (const char* s : {"abcabca", "cccccccccccccccccc", "ab", "b"}) {
        auto o = search(g3, s, PruneConfig::all(), PrecedenceKind::nta_tm1, SearchBudget::nodes(1000));
        EXPECT_EQ(o.decision, Decision::rejected) << s;
        EXPECT_LE(o.stats.expanded, 10u) << s;
    }
}

TEST(Search, EmptyInputAndLambda)
{
    const auto& g4 = corpus::load(4, corpus::Form::basic);
    EXPECT_EQ(search(g4, "", PruneConfig::all(), PrecedenceKind::nta, SearchBudget::nodes(1000)).decision,
              Decision::accepted);
    const auto& g1 = corpus::load(1, corpus::Form::basic);
    EXPECT_EQ(search(g1, "", PruneConfig::all(), PrecedenceKind::nta, SearchBudget::nodes(1000)).decision,
              Decision::rejected);
}

TEST(Search, BudgetExhaustionIsNotRejection)
{
    const auto& g17 = corpus::load(17, corpus::Form::basic);
    auto o = search(g17, "abababababababab", PruneConfig::none(), PrecedenceKind::none, SearchBudget::nodes(50));
    EXPECT_EQ(o.decision, Decision::exhausted_budget);
    EXPECT_EQ(o.stats.expanded, 50u);
    auto t = search(g17, "abababababababab", PruneConfig::none(), PrecedenceKind::none, SearchBudget::seconds(0.0));
    EXPECT_EQ(t.decision, Decision::exhausted_budget);
    EXPECT_TRUE(t.stats.timed_out);
}

TEST(Search, MemoryCapExhaustsBudget)
{
    const auto& g17 = corpus::load(17, corpus::Form::basic);
    const std::string input = "abababababababab";
    auto capped = search(g17, input, PruneConfig::none(), PrecedenceKind::none,
                         SearchBudget::seconds(60).with_memory_limit(std::size_t{1} << 20));
    EXPECT_EQ(capped.decision, Decision::exhausted_budget);
    EXPECT_TRUE(capped.stats.memory_exhausted);
    EXPECT_FALSE(capped.stats.timed_out);
    auto roomy = search(g17, input, PruneConfig::all(), PrecedenceKind::nta_tm1,
                        SearchBudget::seconds(60).with_memory_limit(std::size_t{1} << 30));
    EXPECT_EQ(roomy.decision, corpus::oracle(17, input) ? Decision::accepted : Decision::rejected);
    EXPECT_FALSE(roomy.stats.memory_exhausted);
}

TEST(Search, UnboundedBudgetPreconditions)
{
    const auto& g1 = corpus::load(1, corpus::Form::basic);
    const auto& g3 = corpus::load(3, corpus::Form::basic);
    EXPECT_EQ(search(g1, "aaaaa", PruneConfig::all(), PrecedenceKind::nta, SearchBudget{}).decision, Decision::accepted);
    EXPECT_THROW(search(g3, "abc", PruneConfig::all(), PrecedenceKind::nta, SearchBudget{}), std::invalid_argument);
    EXPECT_THROW(search(g1, "a", PruneConfig::all().without(PruneKind::tl), PrecedenceKind::nta, SearchBudget{}),
                 std::invalid_argument);
}

TEST(Search, InvalidGrammarRejectedBeforeExpansion)
{
    auto g = grammar("start: S\nrelation: a~b\nS -> [a/b]\n");
    EXPECT_THROW(search(g, "a", PruneConfig::all(), PrecedenceKind::nta, SearchBudget::nodes(10)), grammar_error);
}

TEST(Search, PruneCountersAndOrder)
{
    const auto& g1 = corpus::load(1, corpus::Form::basic);
    auto o = search(g1, "aa", PruneConfig::all(), PrecedenceKind::none, SearchBudget::nodes(1000));
    std::uint64_t pruned = 0;
    for (auto k : all_prune_kinds) pruned += o.stats.pruned_by(k);
    EXPECT_EQ(o.stats.generated, pruned + o.stats.duplicates + o.stats.enqueued - 1);
    EXPECT_GT(o.stats.pruned_by(PruneKind::sl) + o.stats.pruned_by(PruneKind::tl), 0u);
}

TEST(Search, PrecedenceNeutrality)
{
    for (int id : {1, 6, 11, 12, 17, 19}) {
        const auto& g = corpus::load(id, corpus::Form::basic);
        for (const auto& s : all_strings(corpus::alphabet(id), 4)) {
            std::set<Decision> seen;
            for (auto k : all_precedence_kinds)
                seen.insert(search(g, s, PruneConfig::all(), k, SearchBudget::nodes(200000)).decision);
            EXPECT_EQ(seen.size(), 1u) << id << " '" << s << "'";
            EXPECT_FALSE(seen.count(Decision::exhausted_budget)) << id << " '" << s << "'";
        }
    }
}

TEST(Search, PruneSubsetsNeverContradict)
{
    for (int id : {1, 6, 12}) {
        const auto& g = corpus::load(id, corpus::Form::basic);
        for (const auto& s : all_strings(corpus::alphabet(id), 3)) {
            bool expected = corpus::oracle(id, s);
            for (unsigned mask = 0; mask < 32; ++mask) {
                auto o = search(g, s, PruneConfig::from_mask(mask), PrecedenceKind::nta_tm1, SearchBudget::nodes(2000));
                if (o.decision == Decision::exhausted_budget) continue;
                EXPECT_EQ(o.decision == Decision::accepted, expected) << id << " '" << s << "' mask " << mask;
            }
        }
    }
}

TEST(Search, Deterministic)
{
    const auto& g = corpus::load(11, corpus::Form::basic);
    auto a = search(g, "abbaab", PruneConfig::all(), PrecedenceKind::wnta_tm2, SearchBudget::nodes(100000));
    auto b = search(g, "abbaab", PruneConfig::all(), PrecedenceKind::wnta_tm2, SearchBudget::nodes(100000));
    EXPECT_EQ(a.decision, b.decision);
    EXPECT_EQ(a.stats.expanded, b.stats.expanded);
    EXPECT_EQ(a.stats.generated, b.stats.generated);
    EXPECT_EQ(a.stats.pruned, b.stats.pruned);
    EXPECT_EQ(a.stats.peak_queue, b.stats.peak_queue);
}

TEST(Search, NoneIsBreadthFirst)
{
    // With NONE and no pruning, the first solution found has a shortest derivation.
    const auto& g = corpus::load(1, corpus::Form::basic);
    SearchOptions opt;
    opt.record_derivation = true;
    auto o = search(g, "aaa", PruneConfig::none(), PrecedenceKind::none, SearchBudget::nodes(10000), opt);
    ASSERT_EQ(o.decision, Decision::accepted);
    ASSERT_TRUE(o.derivation);
    EXPECT_EQ(o.derivation->size(), 4u);
    EXPECT_TRUE(is_solution(replay_derivation(g, *o.derivation), "aaa", g.relation()));
}

TEST(Search, HashOnlyModeSameDecisions)
{
    SearchOptions opt;
    opt.hash_only_visited = true;
    for (int id : {6, 13, 17}) {
        const auto& g = corpus::load(id, corpus::Form::basic);
        for (const auto& s : all_strings(corpus::alphabet(id), 4)) {
            auto exact = search(g, s, PruneConfig::all(), PrecedenceKind::nta_tm1, SearchBudget::nodes(100000));
            auto hashed = search(g, s, PruneConfig::all(), PrecedenceKind::nta_tm1, SearchBudget::nodes(100000), opt);
            EXPECT_EQ(exact.decision, hashed.decision) << id << " " << s;
        }
    }
}

TEST(Configuration, NamesRoundTrip)
{
    for (auto k : all_precedence_kinds) EXPECT_EQ(parse_precedence(to_string(k)), k);
    EXPECT_EQ(to_string(PrecedenceKind::wnta_tm3), "wnta+tm3");
    EXPECT_THROW(parse_precedence("tm4"), std::invalid_argument);
    EXPECT_EQ(parse_prune_config("all"), PruneConfig::all());
    EXPECT_EQ(parse_prune_config("none"), PruneConfig::none());
    auto c = parse_prune_config("sl,re");
    EXPECT_TRUE(c.sl && c.re && !c.tl && !c.ws && !c.rl);
    EXPECT_EQ(to_string(c), "sl,re");
    EXPECT_THROW(parse_prune_config("sl,xx"), std::invalid_argument);
    for (unsigned m = 0; m < 32; ++m) EXPECT_EQ(parse_prune_config(to_string(PruneConfig::from_mask(m))).mask(), m);
}

TEST(WordKey, RoundTripAndInjective)
{
    const auto& g = corpus::load(10, corpus::Form::cnf);
    std::set<std::string> keys;
    std::set<std::string> texts;
    WkWord w = canonicalize({Letter{g.start()}}, g);
    std::vector<WkWord> frontier{w};
    for (int depth = 0; depth < 3; ++depth) {
        std::vector<WkWord> next;
        for (const auto& f : frontier) {
            auto key = encode_word(f);
            EXPECT_EQ(decode_word(key, g), f);
            keys.insert(key);
            texts.insert(to_string(f, g));
            if (leftmost_nonterminal(f))
                for (auto& s : expand(f, g)) next.push_back(std::move(s.word));
        }
        frontier = std::move(next);
    }
    EXPECT_EQ(keys.size(), texts.size());
    EXPECT_THROW(decode_word("\x01", g), std::invalid_argument);
}
