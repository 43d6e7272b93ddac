#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coarsevote/rational.hpp"

namespace coarsevote {

/// Candidates are dense indices 0..m-1; index order doubles as the
/// deterministic tie-breaking order.
using Candidate = int;

using CandidateSet = std::vector<Candidate>;  // kept sorted, no duplicates

struct EmptyRestriction : std::invalid_argument {
    EmptyRestriction() : std::invalid_argument("restriction to an empty candidate set") {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A strict total order over a candidate set (the full set, or a subset for
/// restricted orderings). Highest-ranked candidate first.
class PreferenceOrdering {
public:
    PreferenceOrdering() = default;
    explicit PreferenceOrdering(std::vector<Candidate> ranking);

    const std::vector<Candidate>& ranking() const { return ranking_; }
    int size() const { return static_cast<int>(ranking_.size()); }

    /// Highest-ranked candidate. Throws on an empty ordering.
    Candidate top() const;

    /// 1-based rank of c (1 = top). Throws if c is not in the ordering.
    int rank_of(Candidate c) const;

    bool contains(Candidate c) const;
    bool prefers(Candidate x, Candidate y) const;  // x ranked strictly above y

    /// Members of this ordering, sorted ascending.
    CandidateSet candidate_set() const;

    /// Keeps only the candidates in `keep`, preserving relative order.
    /// Throws EmptyRestriction if the intersection is empty, and
    /// std::invalid_argument if `keep` is not a subset of the members.
    PreferenceOrdering restricted_to(const CandidateSet& keep) const;

    /// Canonical textual form, e.g. "2>0>1".
    std::string to_string() const;
    static PreferenceOrdering from_string(const std::string& s);

    bool operator==(const PreferenceOrdering& o) const { return ranking_ == o.ranking_; }
    bool operator!=(const PreferenceOrdering& o) const { return ranking_ != o.ranking_; }
    bool operator<(const PreferenceOrdering& o) const { return ranking_ < o.ranking_; }

private:
    std::vector<Candidate> ranking_;
};

Candidate top(const PreferenceOrdering& p);

PreferenceOrdering restrict_ordering(const PreferenceOrdering& p, const CandidateSet& keep);

/// All strict total orders over `candidates`, in lexicographic order of their
/// index sequences. This fixed enumeration order defines the K-vector layout
/// used by Dirichlet belief formation.
std::vector<PreferenceOrdering> all_orderings(const CandidateSet& candidates);
std::vector<PreferenceOrdering> all_orderings(int m);

/// A preference profile: one ordering per voter, all over the same candidate set.
class Profile {
public:
    Profile() = default;
    explicit Profile(std::vector<PreferenceOrdering> voters);

    const std::vector<PreferenceOrdering>& voters() const { return voters_; }
    const PreferenceOrdering& voter(int i) const { return voters_.at(i); }
    int n() const { return static_cast<int>(voters_.size()); }

    CandidateSet candidate_set() const;

    Profile restricted_to(const CandidateSet& keep) const;

    /// Replaces voter i's ordering (returns a new profile).
    Profile with_voter(int i, PreferenceOrdering p) const;

private:
    std::vector<PreferenceOrdering> voters_;
};

Profile restrict_profile(const Profile& prof, const CandidateSet& keep);

/// Multiset view of a profile: distinct ballot types with multiplicities.
/// Anonymous rules evaluate on this form in O(#types) instead of O(n).
class CountedProfile {
public:
    CountedProfile() = default;
    explicit CountedProfile(const Profile& prof);
    CountedProfile(std::vector<PreferenceOrdering> types, std::vector<long long> counts);

    const std::vector<PreferenceOrdering>& types() const { return types_; }
    const std::vector<long long>& counts() const { return counts_; }
    long long n() const { return n_; }

    CandidateSet candidate_set() const;

    /// Restriction, merging ballot types that collapse together.
    CountedProfile restricted_to(const CandidateSet& keep) const;

    /// Adds one ballot (merging with an existing type if equal).
    CountedProfile with_ballot(const PreferenceOrdering& p, long long count = 1) const;

    Profile expand() const;  // materializes the n-voter profile

private:
    void normalize();

    std::vector<PreferenceOrdering> types_;
    std::vector<long long> counts_;
    long long n_ = 0;
};

/// Number of top-choice votes per candidate (every member of the candidate
/// set appears as a key, possibly with count 0).
std::map<Candidate, long long> top_counts(const Profile& prof);
std::map<Candidate, long long> top_counts(const CountedProfile& prof);

/// Utility function over candidates 0..m-1, values in [0,1].
class UtilityFunction {
public:
    UtilityFunction() = default;
    explicit UtilityFunction(std::vector<Rational> values);

    const std::vector<Rational>& values() const { return values_; }
    const Rational& value(Candidate c) const { return values_.at(c); }
    int m() const { return static_cast<int>(values_.size()); }

    /// Smallest nonzero pairwise gap (0 if all values equal or m < 2).
    Rational min_gap() const;

    std::string to_string() const;  // comma-separated rationals by index

private:
    std::vector<Rational> values_;
};

/// u consistent with P: u(x) > u(y) iff x is ranked above y (forces all
/// values distinct).
bool is_consistent(const UtilityFunction& u, const PreferenceOrdering& p);

/// Every pair of values is equal or separated by at least alpha.
bool is_alpha_coarse_utility(const UtilityFunction& u, const Rational& alpha);

/// Exact probability distribution over candidates 0..m-1. The constructor
/// enforces mass in [0,1] per candidate and total exactly 1.
class CandidateDistribution {
public:
    CandidateDistribution() = default;
    explicit CandidateDistribution(std::vector<Rational> mass);

    static CandidateDistribution point_mass(int m, Candidate c);
    static CandidateDistribution uniform(int m);
    /// Uniform over a subset of 0..m-1.
    static CandidateDistribution uniform_over(int m, const CandidateSet& support);

    const std::vector<Rational>& mass() const { return mass_; }
    const Rational& mass_of(Candidate c) const { return mass_.at(c); }
    int m() const { return static_cast<int>(mass_.size()); }

    /// Restricts to `keep` and renormalizes. Falls back to uniform over
    /// `keep` when the kept mass is zero. Result is still over 0..m-1.
    CandidateDistribution conditioned_on(const CandidateSet& keep) const;

    bool operator==(const CandidateDistribution& o) const { return mass_ == o.mass_; }
    bool operator!=(const CandidateDistribution& o) const { return mass_ != o.mass_; }

private:
    std::vector<Rational> mass_;
};

/// Exact convex combination (1-q)*a + q*b.
CandidateDistribution mix_distributions(const CandidateDistribution& a,
                                        const CandidateDistribution& b, const Rational& q);

/// Expected utility of a distribution under u (exact).
Rational expected_utility(const UtilityFunction& u, const CandidateDistribution& d);

CandidateSet full_candidate_set(int m);
bool is_subset(const CandidateSet& a, const CandidateSet& b);

}  // namespace coarsevote
