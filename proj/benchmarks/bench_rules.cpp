#include <benchmark/benchmark.h>

#include <coarsevote/analysis.hpp>

using namespace coarsevote;

namespace {

PreferenceOrdering ord(const std::string& s) { return PreferenceOrdering::from_string(s); }

Belief two_leader_belief() {
    return Belief(full_candidate_set(3),
                  {{ord("0>1>2"), Rational(1, 2)}, {ord("1>0>2"), Rational(1, 2)}});
}

}  // namespace

static void EvaluateRepeatedPluralityElim(benchmark::State& state) {
    const auto n = state.range(0);
    const CountedProfile prof =
        sample_counted_profile(form_belief_dirichlet(3, {}), n, 1);
    const VotingRuleSpec rule{RepeatedPluralityElimRule{MarginPolicy::asymptotic(Rational(1, 10))}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(rule, prof));
    }
    state.SetComplexityN(n);
}
BENCHMARK(EvaluateRepeatedPluralityElim)->RangeMultiplier(10)->Range(100, 1'000'000);

static void EvaluatePunishing(benchmark::State& state) {
    const CountedProfile prof =
        sample_counted_profile(form_belief_dirichlet(4, {}), state.range(0), 2);
    const VotingRuleSpec rule{PunishingRule{}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate(rule, prof));
    }
}
BENCHMARK(EvaluatePunishing)->RangeMultiplier(10)->Range(100, 100'000);

static void ExactExpectedUtility(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    const UtilityFunction u{{Rational(1, 2), Rational(0), Rational(1)}};
    const VotingRuleSpec rule{PluralityRule{}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            expected_utility_exact(rule, two_leader_belief(), ord("2>0>1"), u, n));
    }
}
BENCHMARK(ExactExpectedUtility)->DenseRange(5, 25, 10);

static void PivotalityTrials(benchmark::State& state) {
    const EliminationRuleSpec elim =
        RepeatedPluralityElimSpec{MarginPolicy::asymptotic(Rational(1, 10))};
    const Belief phi = two_leader_belief();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            elimination_pivotality_mc(elim, phi, static_cast<int>(state.range(0)), 100, 7));
    }
}
BENCHMARK(PivotalityTrials)->Arg(101)->Arg(1001)->Arg(2001);

static void SampleCountedProfile(benchmark::State& state) {
    const Belief phi = two_leader_belief();
    std::uint64_t stream = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_counted_profile(phi, state.range(0), 11, stream++));
    }
}
BENCHMARK(SampleCountedProfile)->RangeMultiplier(10)->Range(1'000, 1'000'000);

BENCHMARK_MAIN();
