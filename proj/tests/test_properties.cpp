#include <gtest/gtest.h>

#include "properties.hpp"

using namespace testing_support;

namespace {

constexpr std::size_t kCases = 10'000;

void expect_holds(const PropertyResult& r)
{
    EXPECT_EQ(r.cases, kCases);
    EXPECT_TRUE(r.ok()) << r.name << ": " << r.failures << " failures, first: " << r.first_failure;
}

}  // namespace

TEST(Property, CanonicalizationIdempotent) { expect_holds(canonicalization_idempotent(101, kCases)); }

TEST(Property, CanonicalizationAssociative) { expect_holds(canonicalization_associative(202, kCases)); }

TEST(Property, IncrementalLengthsMatchRecount) { expect_holds(incremental_lengths(303, kCases)); }

TEST(Property, EncodeDecodeRoundTrip) { expect_holds(encode_decode_round_trip(404, kCases)); }

TEST(Property, NoWordEnqueuedTwice) { expect_holds(no_duplicate_enqueue(505, kCases)); }

TEST(Property, AcceptedImpliesReplayableDerivation)
{
    std::size_t accepted = 0;
    expect_holds(accepted_implies_derivation(606, kCases, &accepted));
    EXPECT_GT(accepted, kCases / 3);
}

TEST(Property, GeneratorHonest) { expect_holds(generator_honest(707, kCases)); }

TEST(Property, CheckerReportsCounterexamples)
{
    PropertyResult r("demo");
    r.check(true, [] { return std::string("unused"); });
    r.check(false, [] { return std::string("first"); });
    r.check(false, [] { return std::string("second"); });
    EXPECT_EQ(r.failures, 2u);
    EXPECT_EQ(r.first_failure, "first");
    EXPECT_FALSE(r.ok());
}
