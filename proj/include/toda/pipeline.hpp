#pragma once

#include <stdexcept>

#include "toda/monomials.hpp"
#include "toda/quotient.hpp"
#include "toda/report.hpp"
#include "toda/spectral_engine.hpp"

namespace toda {

// The nonexistence argument is stated for p > 5 only.
struct PipelineRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kConclusion =
    "V((p+3)/2) does not exist; V((p+1)/2) is not a ring spectrum — obstruction "
    "computations verified";

// Number of worker threads: TODA_THREADS if set and valid, else the
// hardware count, at least 1.
unsigned worker_threads();

// Full verification pipeline for one prime: engine-vs-closed-form oracle
// over one period, both degree-family lemmas, the per-generator permanent
// cycle steps, and the square obstruction. Sub-checks run concurrently;
// assembly order is deterministic. Throws PipelineRefusal unless p > 5.
PipelineVerdict run_theorem_pipeline(const PrimeContext& ctx);

}  // namespace toda
