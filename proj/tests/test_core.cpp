#include <gtest/gtest.h>

#include "support.hpp"

using namespace wkgram;
using namespace testing_support;

namespace {

const char* kAbc = R"(start: S
relation: identity
S -> A B C | [abc/abc]
A -> [a/a] | [/a]
B -> [b/b]
C -> [c/c]
)";

}  // namespace

TEST(Terminal, ReservedAndUppercaseRejected)
{
    for (char c : std::string("abz019+*.")) EXPECT_TRUE(is_valid_terminal(c)) << c;
    for (char c : std::string("AZ []/|#~:->\t")) EXPECT_FALSE(is_valid_terminal(c)) << c;
}

TEST(MinCount, InfiniteSaturates)
{
    auto inf = MinCount::infinite();
    EXPECT_TRUE((inf + MinCount(3)).is_infinite());
    EXPECT_LT(MinCount(1000000), inf);
    EXPECT_EQ(MinCount(2) + MinCount(3), MinCount(5));
    EXPECT_THROW((void)inf.value(), std::logic_error);
}

TEST(Canonicalize, MergesAdjacentStrandwise)
{
    auto g = grammar(kAbc);
    auto w = word(g, "[abc/] [/a] [b/a]");
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(as_ds(w[0]), (DsString{"abcb", "aa"}));
    EXPECT_EQ(w.upper_length(), 4u);
    EXPECT_EQ(w.lower_length(), 2u);
}

TEST(Canonicalize, NonTerminalsUntouched)
{
    auto g = grammar(kAbc);
    auto w = word(g, "A B C");
    EXPECT_EQ(to_string(w, g), "A B C");
    EXPECT_EQ(w.nt_budget(), MinCount(1 + 2 + 2));
}

TEST(Canonicalize, LambdaWordPreserved)
{
    auto g = grammar(kAbc);
    auto w = word(g, "[/]");
    EXPECT_TRUE(w.is_lambda());
    EXPECT_EQ(to_string(w, g), "[/]");
    EXPECT_TRUE(WkWord{}.is_lambda());
}

TEST(Canonicalize, EmptyLettersDroppedBetweenNonTerminals)
{
    auto g = grammar(kAbc);
    EXPECT_EQ(to_string(word(g, "A [/] [/] B"), g), "A B");
    EXPECT_EQ(to_string(word(g, "[/] A [a/] [/b] B [/]"), g), "A [a/b] B");
}

TEST(ApplyRule, Grammar1Expansion)
{
    auto g = parse_grammar(corpus::text(1));
    const auto& sss = g.rule(1);
    auto w = apply_rule(word(g, "S"), 0, sss, g);
    EXPECT_EQ(to_string(w, g), "S S S");
    auto t = apply_rule(word(g, "S"), 0, g.rule(0), g);
    EXPECT_EQ(to_string(t, g), "[a/a]");
}

TEST(ApplyRule, MergesIntoNeighbours)
{
    auto g = grammar(kAbc);
    auto before = word(g, "[a/a] A B");
    const auto& lower_a = g.rule(g.rules_for(*g.find("A"))[1]);
    auto after = apply_rule(before, 1, lower_a, g);
    EXPECT_EQ(to_string(after, g), "[a/aa] B");
    EXPECT_EQ(after.total_length(), before.total_length() + MinCount(0));
    EXPECT_EQ(*lower_a.length, 0);
}

TEST(ApplyRule, ContractViolations)
{
    auto g = grammar(kAbc);
    auto w = word(g, "[a/a] A B");
    const auto& a_rule = g.rule(g.rules_for(*g.find("A"))[0]);
    EXPECT_THROW(apply_rule(w, 5, a_rule, g), std::out_of_range);
    EXPECT_THROW(apply_rule(w, 0, a_rule, g), std::invalid_argument);
    EXPECT_THROW(apply_rule(w, 2, a_rule, g), std::invalid_argument);
}

TEST(Leftmost, FindsFirstNonTerminal)
{
    auto g = grammar(kAbc);
    EXPECT_EQ(leftmost_nonterminal(word(g, "[ab/c] A B")), 1u);
    EXPECT_EQ(leftmost_nonterminal(word(g, "[abc/abc]")), std::nullopt);
    EXPECT_EQ(leftmost_nonterminal(word(g, "A")), 0u);
}

TEST(IsSolution, Criteria)
{
    auto g = grammar(kAbc);
    auto id = Relation::identity("ab");
    EXPECT_TRUE(is_solution(word(g, "[aa/aa]"), "aa", id));
    EXPECT_FALSE(is_solution(word(g, "[aa/ab]"), "aa", id));
    EXPECT_FALSE(is_solution(word(g, "[aa/a]"), "aa", id));
    EXPECT_FALSE(is_solution(word(g, "[ab/ab]"), "aa", id));
    EXPECT_FALSE(is_solution(word(g, "[a/a] A"), "a", id));
    EXPECT_TRUE(is_solution(WkWord{}, "", id));
}

TEST(IsSolution, ComplementaryRelation)
{
    const auto& g5 = corpus::load(5, corpus::Form::basic);
    auto w = canonicalize({Letter{DsString{"ctg", "gac"}}}, g5);
    EXPECT_TRUE(is_solution(w, "ctg", g5.relation()));
    auto same = canonicalize({Letter{DsString{"ctg", "ctg"}}}, g5);
    EXPECT_FALSE(is_solution(same, "ctg", g5.relation()));
}

TEST(MinLengths, WorkedExample)
{
    auto g = grammar(R"(start: A
relation: identity
A -> A A | [ab/cd] | B B
B -> [a/]
)");
    EXPECT_EQ(g.min_length(*g.find("B")), MinCount(1));
    EXPECT_EQ(g.min_length(*g.find("A")), MinCount(2));
}

TEST(MinLengths, ErasableIsZeroAndCycleIsInfinite)
{
    auto g = grammar(R"(start: S
relation: identity
S -> N | A
N -> [/]
A -> B
B -> A
)");
    EXPECT_EQ(g.min_length(*g.find("N")), MinCount(0));
    EXPECT_TRUE(g.min_length(*g.find("A")).is_infinite());
    EXPECT_TRUE(g.min_length(*g.find("B")).is_infinite());
    EXPECT_EQ(g.min_length(g.start()), MinCount(0));
}

TEST(MinDistances, Examples)
{
    auto g = grammar(R"(start: S
relation: identity
S -> A | C
A -> B B
B -> [a/]
C -> [a/a]
D -> D D
)");
    EXPECT_EQ(g.min_distance(*g.find("C")), MinCount(1));
    EXPECT_EQ(g.min_distance(*g.find("A")), MinCount(*brute_min_distance(g, *g.find("A"))));
    EXPECT_EQ(g.min_distance(*g.find("A")), MinCount(3));
    EXPECT_TRUE(g.min_distance(*g.find("D")).is_infinite());
}

TEST(MinLengths, AgreeWithBruteForceOnCorpus)
{
    for (int id = corpus::first_id; id <= corpus::last_id; ++id)
        for (auto form : {corpus::Form::basic, corpus::Form::cnf}) {
            const auto& g = corpus::load(id, form);
            for (std::uint32_t n = 0; n < g.nonterminal_count(); ++n) {
                NonTerminal a{n};
                auto len = brute_min_length(g, a);
                auto dist = brute_min_distance(g, a);
                ASSERT_TRUE(len && dist) << "grammar " << id << " " << g.name(a);
                EXPECT_EQ(g.min_length(a), MinCount(*len)) << "grammar " << id << " " << g.name(a);
                EXPECT_EQ(g.min_distance(a), MinCount(*dist)) << "grammar " << id << " " << g.name(a);
            }
        }
}

TEST(RuleLength, MatchesDefinition)
{
    for (int id : {1, 4, 10, 16}) {
        const auto& g = corpus::load(id, corpus::Form::basic);
        for (const auto& r : g.rules()) {
            std::int64_t v = 0;
            for (const auto& l : r.rhs)
                v += is_ds(l) ? static_cast<std::int64_t>(as_ds(l).size())
                              : static_cast<std::int64_t>(g.min_length(as_nonterminal(l)).value());
            ASSERT_TRUE(r.length.has_value());
            EXPECT_EQ(*r.length, v - static_cast<std::int64_t>(g.min_length(r.lhs).value()));
        }
    }
}

TEST(Relation, IdentityAndPairs)
{
    auto r = Relation::identity("ab");
    EXPECT_TRUE(r.contains('a', 'a'));
    EXPECT_FALSE(r.contains('a', 'b'));
    EXPECT_TRUE(r.is_identity_on("ab"));
    EXPECT_TRUE(r.is_symmetric());
    Relation q;
    q.add('a', 'b');
    EXPECT_FALSE(q.is_symmetric());
    q.add('b', 'a');
    EXPECT_TRUE(q.is_symmetric());
    EXPECT_FALSE(q.is_identity_on("ab"));
}

TEST(Validate, CorpusGrammar1Clean)
{
    EXPECT_TRUE(validate(corpus::load(1, corpus::Form::basic)).empty());
}

TEST(Validate, AsymmetricRelationIsError)
{
    auto g = grammar("start: S\nrelation: a~b\nS -> [a/b]\n");
    auto d = validate(g);
    ASSERT_TRUE(d.has_errors());
    EXPECT_NE(d.items.front().message.find("relation not symmetric"), std::string::npos);
}

TEST(Validate, UndeclaredNonTerminalIsError)
{
    auto g = grammar("start: S\nrelation: identity\nS -> [a/a] Q\n");
    auto d = validate(g);
    ASSERT_TRUE(d.has_errors());
    EXPECT_NE(d.items.front().message.find("Q"), std::string::npos);
}

TEST(Validate, WarningsAreNotErrors)
{
    auto g = grammar(R"(start: S
relation: identity
S -> [a/a] | [a/a] | L
L -> L
U -> [b/b]
)");
    auto d = validate(g);
    EXPECT_FALSE(d.has_errors());
    std::string all;
    for (const auto& i : d.items) all += i.message + "\n";
    EXPECT_NE(all.find("unproductive non-terminal L"), std::string::npos) << all;
    EXPECT_NE(all.find("unreachable non-terminal U"), std::string::npos) << all;
    EXPECT_NE(all.find("duplicate rule"), std::string::npos) << all;
}

TEST(Validate, UnproductiveNonTerminalGetsInfiniteBudget)
{
    auto g = grammar("start: S\nrelation: identity\nS -> [a/a] | L\nL -> L [a/a]\n");
    auto w = word(g, "L");
    EXPECT_TRUE(w.total_length().is_infinite());
    EXPECT_EQ(prune_tl(w, 100), PruneVerdict::prune);
}
