#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "coarsevote/rational.hpp"
#include "coarsevote/rng.hpp"
#include "coarsevote/types.hpp"

namespace coarsevote {

/// Largest beta such that every mass of the certified belief is an integer
/// multiple of beta. The belief is alpha-coarse iff beta >= alpha.
struct CoarsenessCertificate {
    Rational beta;
};

/// An i.i.d. belief: exact probability distribution over the orderings of a
/// candidate set. Each of the other voters' ballots is assumed drawn
/// independently from this distribution. Immutable once built.
class Belief {
public:
    Belief() = default;

    /// Support map; orderings with zero mass may be omitted. Masses must sum
    /// to exactly 1 and every ordering must cover `candidates`.
    Belief(CandidateSet candidates, std::map<PreferenceOrdering, Rational> mass);

    /// Belief over the full candidate set 0..m-1, mass vector laid out in the
    /// fixed enumeration order of all_orderings(m).
    static Belief from_mass_vector(int m, const std::vector<Rational>& mass);

    static Belief point_mass(const PreferenceOrdering& p);

    const CandidateSet& candidates() const { return candidates_; }
    int num_candidates() const { return static_cast<int>(candidates_.size()); }

    /// Mass of an ordering (0 when outside the support).
    Rational mass_of(const PreferenceOrdering& p) const;

    /// Support entries with nonzero mass, in ordering order.
    const std::vector<std::pair<PreferenceOrdering, Rational>>& support() const {
        return support_;
    }

    /// Probability that each candidate is the top choice of a draw.
    std::map<Candidate, Rational> top_probabilities() const;

    bool operator==(const Belief& o) const;
    bool operator<(const Belief& o) const;

private:
    CandidateSet candidates_;
    std::vector<std::pair<PreferenceOrdering, Rational>> support_;
};

/// beta = gcd of the masses (gcd(0, x) = x); the point mass certifies beta = 1.
CoarsenessCertificate coarseness(const Belief& phi);

/// Distribution of P|_A where P ~ phi. Throws EmptyRestriction on empty A.
Belief restrict_belief(const Belief& phi, const CandidateSet& keep);

/// Relative-frequency belief from observations; (1/l)-coarse by construction.
Belief form_belief_empirical(const std::vector<PreferenceOrdering>& observations);

/// Posterior-mean belief starting from the flat prior over all K = m!
/// orderings: mass(P_i) = (1 + c_i) / (K + l); 1/(K+l)-coarse.
Belief form_belief_dirichlet(int m, const std::vector<PreferenceOrdering>& observations);

/// All distributions over the m! orderings whose masses are multiples of 1/d
/// for some integer d <= floor(1/alpha), deduplicated. These uniform grids
/// are the canonical alpha-coarse family the verification engine searches.
/// Throws BudgetExceeded if the pre-dedup enumeration would exceed `budget`.
std::vector<Belief> enumerate_coarse_beliefs(const Rational& alpha, int m,
                                             long long budget = 10'000'000);

/// Streaming variant: invokes `sink` per belief; stops early if it returns false.
void enumerate_coarse_beliefs(const Rational& alpha, int m,
                              const std::function<bool(const Belief&)>& sink,
                              long long budget = 10'000'000);

/// k i.i.d. draws from phi; deterministic given (seed, stream): draw j uses
/// counter index j, so the draws are independent of evaluation order.
Profile sample_profile(const Belief& phi, int k, std::uint64_t seed, std::uint64_t stream = 0);

/// Same draws in multiset form (the fast path for large k).
CountedProfile sample_counted_profile(const Belief& phi, long long k, std::uint64_t seed,
                                      std::uint64_t stream = 0);

}  // namespace coarsevote
