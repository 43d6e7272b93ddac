#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <coarsevote/types.hpp>

using namespace coarsevote;

namespace {

PreferenceOrdering ord(const std::string& s) { return PreferenceOrdering::from_string(s); }

}  // namespace

TEST_CASE("top of an ordering") {
    CHECK(ord("0>1>2").top() == 0);
    CHECK(ord("2>0>1").top() == 2);
    CHECK(ord("0").top() == 0);
}

TEST_CASE("ordering construction rejects junk") {
    CHECK_THROWS_AS(PreferenceOrdering(std::vector<Candidate>{}), std::invalid_argument);
    CHECK_THROWS_AS(PreferenceOrdering({0, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(PreferenceOrdering::from_string("0>>1"), std::invalid_argument);
    CHECK_THROWS_AS(PreferenceOrdering::from_string(""), std::invalid_argument);
}

TEST_CASE("restrict_ordering keeps relative order") {
    CHECK(restrict_ordering(ord("0>1>2"), {0, 2}) == ord("0>2"));
    CHECK(restrict_ordering(ord("2>1>0"), {0, 1, 2}) == ord("2>1>0"));
    CHECK(restrict_ordering(ord("1>2>0"), {2}) == ord("2"));
    CHECK_THROWS_AS(restrict_ordering(ord("0>1"), {}), EmptyRestriction);
    CHECK_THROWS_AS(restrict_ordering(ord("0>1"), {5}), std::invalid_argument);
}

TEST_CASE("restriction composes: (P|A)|B == P|B for B subseteq A") {
    // exhaustive over m = 4
    const auto orderings = all_orderings(4);
    const CandidateSet full = full_candidate_set(4);
    for (const auto& p : orderings) {
        for (int amask = 1; amask < 16; ++amask) {
            CandidateSet a;
            for (int c = 0; c < 4; ++c)
                if (amask & (1 << c)) a.push_back(c);
            const auto restricted_a = p.restricted_to(a);
            for (int bmask = 1; bmask < 16; ++bmask) {
                if ((bmask & amask) != bmask) continue;  // B must be a subset of A
                CandidateSet b;
                for (int c = 0; c < 4; ++c)
                    if (bmask & (1 << c)) b.push_back(c);
                CHECK(restricted_a.restricted_to(b) == p.restricted_to(b));
            }
        }
    }
}

TEST_CASE("restrict_profile is componentwise") {
    const Profile prof({ord("0>1>2"), ord("2>0>1")});
    const Profile restricted = restrict_profile(prof, {0, 2});
    CHECK(restricted.voter(0) == ord("0>2"));
    CHECK(restricted.voter(1) == ord("2>0"));

    CHECK(restrict_profile(prof, {0, 1, 2}).voters() == prof.voters());
    CHECK(restrict_profile(Profile({ord("1>0>2")}), {0, 1}).voter(0) == ord("1>0"));
}

TEST_CASE("profiles require a shared candidate set and n >= 1") {
    CHECK_THROWS_AS(Profile(std::vector<PreferenceOrdering>{}), std::invalid_argument);
    CHECK_THROWS_AS(Profile({ord("0>1"), ord("0>1>2")}), std::invalid_argument);
}

TEST_CASE("top_counts") {
    const Profile prof({ord("0>1"), ord("0>1"), ord("1>0")});
    const auto counts = top_counts(prof);
    CHECK(counts.at(0) == 2);
    CHECK(counts.at(1) == 1);

    const auto counts3 = top_counts(Profile({ord("2>0>1")}));
    CHECK(counts3.at(0) == 0);
    CHECK(counts3.at(1) == 0);
    CHECK(counts3.at(2) == 1);
}

TEST_CASE("counted profile round-trips and merges types") {
    const Profile prof({ord("0>1"), ord("1>0"), ord("0>1")});
    const CountedProfile counted(prof);
    CHECK(counted.n() == 3);
    CHECK(counted.types().size() == 2);

    // restriction that collapses distinct types
    const CountedProfile big(Profile({ord("0>1>2"), ord("0>2>1"), ord("2>0>1")}));
    const CountedProfile collapsed = big.restricted_to({0, 1});
    CHECK(collapsed.types().size() == 1);
    CHECK(collapsed.counts().at(0) == 3);
    CHECK(top_counts(collapsed).at(0) == 3);
}

TEST_CASE("is_consistent") {
    // u keyed by candidate index: candidates 0,1,2
    CHECK(is_consistent(UtilityFunction({Rational(1), Rational(1, 2), Rational(0)}),
                        ord("0>1>2")));
    CHECK_FALSE(is_consistent(UtilityFunction({Rational(1), Rational(1), Rational(0)}),
                              ord("0>1>2")));
    CHECK_FALSE(is_consistent(UtilityFunction({Rational(0), Rational(1)}), ord("0>1")));
}

TEST_CASE("is_alpha_coarse_utility") {
    CHECK(is_alpha_coarse_utility(UtilityFunction({Rational(1), Rational(1, 2), Rational(0)}),
                                  Rational(1, 2)));
    CHECK_FALSE(is_alpha_coarse_utility(
        UtilityFunction({Rational(1), Rational(3, 5), Rational(0)}), Rational(1, 2)));
    CHECK(is_alpha_coarse_utility(
        UtilityFunction({Rational(1, 3), Rational(1, 3), Rational(1, 3)}), Rational(9, 10)));
}

TEST_CASE("consistency implies coarseness at the minimum gap") {
    // exhaustive over a small value grid, m = 3
    std::vector<Rational> grid{Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                               Rational(1)};
    for (const auto& a : grid)
        for (const auto& b : grid)
            for (const auto& c : grid) {
                const UtilityFunction u({a, b, c});
                for (const auto& p : all_orderings(3)) {
                    if (!is_consistent(u, p)) continue;
                    const Rational gap = u.min_gap();
                    REQUIRE(gap > 0);
                    CHECK(is_alpha_coarse_utility(u, gap));
                }
            }
}

TEST_CASE("distributions enforce exact total mass") {
    CHECK_THROWS_AS(CandidateDistribution({Rational(1, 2), Rational(1, 3)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(CandidateDistribution({Rational(3, 2), Rational(-1, 2)}),
                    std::invalid_argument);
    const auto d = CandidateDistribution::point_mass(3, 1);
    CHECK(d.mass_of(1) == 1);
    CHECK(d.mass_of(0) == 0);
}

TEST_CASE("conditioning a distribution") {
    const CandidateDistribution d({Rational(1, 2), Rational(1, 4), Rational(1, 4)});
    const auto cond = d.conditioned_on({0, 1});
    CHECK(cond.mass_of(0) == Rational(2, 3));
    CHECK(cond.mass_of(1) == Rational(1, 3));
    CHECK(cond.mass_of(2) == 0);

    // zero kept mass falls back to uniform over the kept set
    const auto zero = CandidateDistribution::point_mass(3, 0).conditioned_on({1, 2});
    CHECK(zero.mass_of(1) == Rational(1, 2));
    CHECK(zero.mass_of(2) == Rational(1, 2));
}

TEST_CASE("ordering string round trip") {
    for (const auto& p : all_orderings(3)) {
        CHECK(PreferenceOrdering::from_string(p.to_string()) == p);
    }
    CHECK(ord("2>0>1").to_string() == "2>0>1");
}

TEST_CASE("all_orderings is lexicographic in the index sequence") {
    const auto orderings = all_orderings(3);
    REQUIRE(orderings.size() == 6);
    CHECK(orderings[0] == ord("0>1>2"));
    CHECK(orderings[1] == ord("0>2>1"));
    CHECK(orderings[2] == ord("1>0>2"));
    CHECK(orderings[3] == ord("1>2>0"));
    CHECK(orderings[4] == ord("2>0>1"));
    CHECK(orderings[5] == ord("2>1>0"));
}

TEST_CASE("rational helpers") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("7") == Rational(7));
    CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK(rational_to_string(Rational(1, 2)) == "1/2");
    CHECK(rational_gcd(Rational(1, 2), Rational(1, 3)) == Rational(1, 6));
    CHECK(rational_gcd(Rational(0), Rational(1, 4)) == Rational(1, 4));
}
