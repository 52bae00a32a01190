// Serial reference vs OpenMP kernels on a synthetic chain program.

#include "lpad/kernels.hpp"
#include "lpad/syntax.hpp"

#include <benchmark/benchmark.h>

#include <string>

namespace {

using namespace lpad;

// n ternary instances; q holds when some link fires and its guard does not.
std::string chain(int n) {
    std::string s;
    for (int i = 1; i <= n; ++i) {
        const std::string k = std::to_string(i);
        s += "h" + k + ":0.3; g" + k + ":0.3.\n";
        s += "q :- h" + k + ", \\+g" + std::to_string(i % n + 1) + ".\n";
    }
    return s;
}

kernels::Exec mode(const benchmark::State& st) { return st.range(1) ? kernels::Exec::Parallel : kernels::Exec::Serial; }

void BM_QueryProb(benchmark::State& st) {
    const GroundProgram g = ground(parse_program(chain(static_cast<int>(st.range(0)))));
    const kernels::CompiledProgram p(g);
    const Query q = parse_query("q");
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::query_prob(p, q, mode(st)));
    st.SetLabel(st.range(1) ? "parallel" : "serial");
}

void BM_ExprProb(benchmark::State& st) {
    const GroundProgram g = ground(parse_program(chain(static_cast<int>(st.range(0)))));
    const EventSpace es = g.events();
    std::vector<ChoiceExpr> terms;
    std::vector<InstanceKey> order;
    for (std::size_t i = 0; i < es.size(); ++i) {
        const auto& a = es.instances()[i].key;
        const auto& b = es.instances()[(i + 1) % es.size()].key;
        order.push_back(a);
        terms.push_back(ChoiceExpr::conj(ChoiceExpr::choice({a, 1}), ChoiceExpr::negation(ChoiceExpr::choice({b, 2}))));
    }
    const ChoiceExpr e = ChoiceExpr::disj(std::move(terms));
    for (auto _ : st)
        benchmark::DoNotOptimize(kernels::expr_prob(e, order, es, mode(st)));
    st.SetLabel(st.range(1) ? "parallel" : "serial");
}

} // namespace

BENCHMARK(BM_QueryProb)->ArgsProduct({{8, 10, 12}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExprProb)->ArgsProduct({{8, 10, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
