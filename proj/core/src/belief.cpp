#include "coarsevote/belief.hpp"

#include <algorithm>
#include <set>

namespace coarsevote {

Belief::Belief(CandidateSet candidates, std::map<PreferenceOrdering, Rational> mass)
    : candidates_(std::move(candidates)) {
    if (candidates_.empty()) throw std::invalid_argument("belief over empty candidate set");
    std::sort(candidates_.begin(), candidates_.end());
    Rational total = 0;
    for (auto& [p, q] : mass) {
        if (p.candidate_set() != candidates_)
            throw std::invalid_argument("belief support ordering over wrong candidate set");
        if (q < 0 || q > 1) throw std::invalid_argument("belief mass outside [0,1]");
        total += q;
        if (q > 0) support_.emplace_back(p, q);
    }
    if (total != 1) throw std::invalid_argument("belief masses must sum to exactly 1");
}

Belief Belief::from_mass_vector(int m, const std::vector<Rational>& mass) {
    const auto orderings = all_orderings(m);
    if (mass.size() != orderings.size())
        throw std::invalid_argument("mass vector length must be m!");
    std::map<PreferenceOrdering, Rational> support;
    for (std::size_t i = 0; i < orderings.size(); ++i) support[orderings[i]] = mass[i];
    return Belief(full_candidate_set(m), std::move(support));
}

Belief Belief::point_mass(const PreferenceOrdering& p) {
    return Belief(p.candidate_set(), {{p, Rational(1)}});
}

Rational Belief::mass_of(const PreferenceOrdering& p) const {
    for (const auto& [q, mass] : support_)
        if (q == p) return mass;
    return 0;
}

std::map<Candidate, Rational> Belief::top_probabilities() const {
    std::map<Candidate, Rational> tops;
    for (Candidate c : candidates_) tops[c] = 0;
    for (const auto& [p, mass] : support_) tops[p.top()] += mass;
    return tops;
}

bool Belief::operator==(const Belief& o) const {
    return candidates_ == o.candidates_ && support_ == o.support_;
}

bool Belief::operator<(const Belief& o) const {
    if (candidates_ != o.candidates_) return candidates_ < o.candidates_;
    return support_ < o.support_;
}

CoarsenessCertificate coarseness(const Belief& phi) {
    Rational beta = 0;
    for (const auto& [p, mass] : phi.support()) beta = rational_gcd(beta, mass);
    return CoarsenessCertificate{beta};
}

Belief restrict_belief(const Belief& phi, const CandidateSet& keep) {
    if (keep.empty()) throw EmptyRestriction();
    std::map<PreferenceOrdering, Rational> mass;
    for (const auto& [p, q] : phi.support()) mass[p.restricted_to(keep)] += q;
    return Belief(keep, std::move(mass));
}

Belief form_belief_empirical(const std::vector<PreferenceOrdering>& observations) {
    if (observations.empty())
        throw std::invalid_argument("empirical belief needs at least one observation");
    const auto l = static_cast<long long>(observations.size());
    std::map<PreferenceOrdering, Rational> mass;
    for (const auto& p : observations) mass[p] += Rational(1, l);
    return Belief(observations.front().candidate_set(), std::move(mass));
}

Belief form_belief_dirichlet(int m, const std::vector<PreferenceOrdering>& observations) {
    const auto orderings = all_orderings(m);
    const auto K = static_cast<long long>(orderings.size());
    const auto l = static_cast<long long>(observations.size());
    std::map<PreferenceOrdering, long long> counts;
    for (const auto& p : orderings) counts[p] = 0;
    for (const auto& p : observations) {
        auto it = counts.find(p);
        if (it == counts.end())
            throw std::invalid_argument("observation over wrong candidate set");
        ++it->second;
    }
    std::map<PreferenceOrdering, Rational> mass;
    for (const auto& [p, c] : counts) mass[p] = Rational(1 + c, K + l);
    return Belief(full_candidate_set(m), std::move(mass));
}

namespace {

// Yields all compositions of d into `parts` nonnegative summands.
void for_each_composition(long long d, int parts, std::vector<long long>& current,
                          const std::function<void(const std::vector<long long>&)>& fn) {
    if (parts == 1) {
        current.push_back(d);
        fn(current);
        current.pop_back();
        return;
    }
    for (long long head = 0; head <= d; ++head) {
        current.push_back(head);
        for_each_composition(d - head, parts - 1, current, fn);
        current.pop_back();
    }
}

BigInt compositions_count(long long d, int parts) {
    // C(d + parts - 1, parts - 1)
    BigInt num = 1, den = 1;
    for (int i = 1; i <= parts - 1; ++i) {
        num *= d + i;
        den *= i;
    }
    return num / den;
}

}  // namespace

void enumerate_coarse_beliefs(const Rational& alpha, int m,
                              const std::function<bool(const Belief&)>& sink,
                              long long budget) {
    if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
    const auto orderings = all_orderings(m);
    const int K = static_cast<int>(orderings.size());
    const long long dmax = static_cast<long long>(BigInt(numerator(Rational(1) / alpha) /
                                                          denominator(Rational(1) / alpha)));

    BigInt total = 0;
    for (long long d = 1; d <= dmax; ++d) total += compositions_count(d, K);
    if (total > budget)
        throw BudgetExceeded("coarse-belief enumeration needs " + total.str() +
                             " grid points, budget is " + std::to_string(budget));

    std::set<std::vector<Rational>> seen;
    const CandidateSet cset = full_candidate_set(m);
    bool stop = false;
    for (long long d = 1; d <= dmax && !stop; ++d) {
        std::vector<long long> current;
        for_each_composition(d, K, current, [&](const std::vector<long long>& counts) {
            if (stop) return;
            std::vector<Rational> mass(K);
            for (int i = 0; i < K; ++i) mass[i] = Rational(counts[i], d);
            if (!seen.insert(mass).second) return;
            std::map<PreferenceOrdering, Rational> support;
            for (int i = 0; i < K; ++i) support[orderings[i]] = mass[i];
            if (!sink(Belief(cset, std::move(support)))) stop = true;
        });
    }
}

std::vector<Belief> enumerate_coarse_beliefs(const Rational& alpha, int m, long long budget) {
    std::vector<Belief> out;
    enumerate_coarse_beliefs(
        alpha, m,
        [&](const Belief& b) {
            out.push_back(b);
            return true;
        },
        budget);
    return out;
}

namespace {

// CDF walk over the support, precomputed in doubles for the sampling path.
std::vector<double> support_cdf(const Belief& phi) {
    std::vector<double> cdf;
    cdf.reserve(phi.support().size());
    double cum = 0;
    for (const auto& [p, mass] : phi.support()) {
        cum += to_double(mass);
        cdf.push_back(cum);
    }
    cdf.back() = 1.0;
    return cdf;
}

std::size_t draw_index(const std::vector<double>& cdf, double u) {
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
        if (u < cdf[i]) return i;
    return cdf.size() - 1;
}

}  // namespace

Profile sample_profile(const Belief& phi, int k, std::uint64_t seed, std::uint64_t stream) {
    if (k < 1) throw std::invalid_argument("need at least one draw");
    SplitRng rng(seed, stream);
    const auto cdf = support_cdf(phi);
    std::vector<PreferenceOrdering> voters;
    voters.reserve(k);
    for (int j = 0; j < k; ++j)
        voters.push_back(phi.support()[draw_index(cdf, rng.unit_at(j))].first);
    return Profile(std::move(voters));
}

CountedProfile sample_counted_profile(const Belief& phi, long long k, std::uint64_t seed,
                                      std::uint64_t stream) {
    if (k < 1) throw std::invalid_argument("need at least one draw");
    SplitRng rng(seed, stream);
    const auto cdf = support_cdf(phi);
    std::vector<long long> tally(phi.support().size(), 0);
    for (long long j = 0; j < k; ++j) ++tally[draw_index(cdf, rng.unit_at(j))];
    std::vector<PreferenceOrdering> types;
    std::vector<long long> counts;
    for (std::size_t i = 0; i < tally.size(); ++i) {
        if (tally[i] == 0) continue;
        types.push_back(phi.support()[i].first);
        counts.push_back(tally[i]);
    }
    return CountedProfile(std::move(types), std::move(counts));
}

}  // namespace coarsevote
