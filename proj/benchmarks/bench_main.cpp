#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "ucalc/dominators.hpp"
#include "ucalc/eval.hpp"
#include "ucalc/syntax.hpp"
#include "ucalc/translate.hpp"
#include "ucalc/vminus.hpp"

namespace {

using namespace ucalc;

vminus::Function intsqrt() {
  std::ifstream in(std::string(UCALC_BENCH_DATA) + "/intsqrt.vm");
  std::ostringstream ss;
  ss << in.rdbuf();
  return vminus::parse_function(ss.str());
}

// Counts down from n through a self-applied lambda.
TermPtr countdown(long long n) {
  return parse_term("((lambda (f) (f f " + std::to_string(n) +
                    ")) (lambda (self k) (if (= k 0) 0 (self self (- k 1)))))");
}

void BM_EvalCountdown(benchmark::State& st) {
  TermPtr t = countdown(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(eval(t, Fuel{10000000}));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_EvalCountdown)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

// A straight chain with a diamond every few blocks.
vminus::Function ladder(int n) {
  vminus::Function f;
  f.name = "ladder";
  for (int i = 0; i < n; ++i) {
    vminus::Block b;
    b.label = "b" + std::to_string(i);
    if (i + 2 >= n)
      b.term = vminus::Ret{vminus::Operand::constant(0)};
    else if (i % 3 == 0)
      b.term = vminus::BrCond{vminus::Operand::constant(1), "b" + std::to_string(i + 1), "b" + std::to_string(i + 2)};
    else
      b.term = vminus::Br{"b" + std::to_string(i + 1)};
    f.blocks.push_back(b);
  }
  return f;
}

void BM_Dominators(benchmark::State& st) {
  vminus::Function f = ladder(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(vminus::compute_dominators(f));
  st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Dominators)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_SimplifyLoop(benchmark::State& st) {
  vminus::Function f = intsqrt();
  for (auto _ : st) benchmark::DoNotOptimize(vminus::simplify_function_cfg(f));
}
BENCHMARK(BM_SimplifyLoop);

void BM_RunLoop(benchmark::State& st) {
  vminus::Function f = intsqrt();
  for (auto _ : st) benchmark::DoNotOptimize(vminus::eval_vminus(f, {st.range(0)}, 1000000));
}
BENCHMARK(BM_RunLoop)->Arg(100)->Arg(10000);

void BM_TranslateAndEvalLoop(benchmark::State& st) {
  vminus::Function f = intsqrt();
  for (auto _ : st) {
    TermPtr t = translate::translate_function(f);
    benchmark::DoNotOptimize(eval(translate::apply_to_inputs(t, {st.range(0)}), Fuel{10000000}));
  }
}
BENCHMARK(BM_TranslateAndEvalLoop)->Arg(100)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
