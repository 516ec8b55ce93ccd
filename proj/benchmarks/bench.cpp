#include <benchmark/benchmark.h>

#include <random>

#include "entrotree/dmql.hpp"
#include "entrotree/entropy.hpp"
#include "entrotree/induction.hpp"
#include "random_data.hpp"

namespace {

using namespace entrotree;

void BM_ExpectedInfo(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(state.range(0)));
  for (auto& c : counts) c = count(rng) + 1;
  for (auto _ : state) benchmark::DoNotOptimize(expected_info(counts));
}
BENCHMARK(BM_ExpectedInfo)->Arg(2)->Arg(8)->Arg(64);

void BM_BuildTree(benchmark::State& state) {
  std::mt19937_64 rng(2);
  testing::RandomShape shape{.max_tuples = static_cast<std::size_t>(state.range(0)),
                             .max_attributes = 8, .max_values = 6, .max_classes = 4,
                             .max_count = 5};
  auto d = testing::random_dataset(rng, shape);
  InductionConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(build_tree(d, cfg));
  state.counters["tuples"] = static_cast<double>(d.size());
}
BENCHMARK(BM_BuildTree)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ParseDmql(benchmark::State& state) {
  const std::string text =
      "classify Decision_Tree\n"
      "according to priority1 {country(\"India\",\"USA\",\"China\",\"Cuba\") attribute values}\n"
      "according to priority2 {region(\"India.east\",\"USA.west\",\"Cuba.north\") attribute values}\n"
      "in relevance to fam_inc_pyear\n"
      "with attribute values for region count\n"
      "from edu_dataset";
  for (auto _ : state) benchmark::DoNotOptimize(dmql::parse(text));
}
BENCHMARK(BM_ParseDmql);

}  // namespace
BENCHMARK_MAIN();
