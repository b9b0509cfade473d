#include <benchmark/benchmark.h>

#include "mfr/io_util.hpp"
#include "mfr/recognizer.hpp"
#include "mfr/step.hpp"
#include "mfr/synth.hpp"

namespace {

const mfr::SynthesizedModel& block() {
  static const mfr::SynthesizedModel s = [] {
    for (mfr::SynthesizedModel& m : mfr::standard_suite()) {
      if (m.name == "multi_feature_block") return m;
    }
    throw std::runtime_error("multi_feature_block missing");
  }();
  return s;
}

void BM_DescriptorAllFaces(benchmark::State& state) {
  const mfr::GeomContext ctx(block().model);
  for (auto _ : state) {
    for (const mfr::Face& f : block().model.faces()) {
      benchmark::DoNotOptimize(mfr::extract_descriptor(ctx, f.id, {}));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(block().model.faces().size()));
}
BENCHMARK(BM_DescriptorAllFaces);

void BM_RecognizeBlock(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfr::recognize(block().model, mfr::default_library(), {}, {}));
  }
}
BENCHMARK(BM_RecognizeBlock);

void BM_StepImport(benchmark::State& state) {
  const std::string text = mfr::read_text_file(std::string(MFR_TEST_DATA) + "/counterbore.step");
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfr::step_to_model(mfr::parse_step(text)));
  }
}
BENCHMARK(BM_StepImport);

}  // namespace

BENCHMARK_MAIN();
