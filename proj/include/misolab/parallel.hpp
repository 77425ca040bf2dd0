#pragma once

// Trial-parallel kernels. Every Monte Carlo loop in the library goes through
// run_trials (map) or reduce_trials (chunked fold). Each has an OpenMP path
// and a serial reference path; tests pin the two against each other.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace misolab {

enum class Execution { Serial, Parallel };

/// Caps OpenMP worker threads for subsequent parallel kernels (<= 0 restores
/// the runtime default).
inline void set_worker_limit(int threads) {
    static const int default_threads = omp_get_max_threads();
    omp_set_num_threads(threads > 0 ? threads : default_threads);
}

inline int worker_limit() { return omp_get_max_threads(); }

/// out[i] = kernel(i) for i in [0, trials). Results are written by index, so
/// the output never depends on scheduling.
template <class Sample, class Kernel>
std::vector<Sample> run_trials(std::size_t trials, Kernel&& kernel, Execution exec = Execution::Parallel) {
    std::vector<Sample> out(trials);
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < trials; ++i) out[i] = kernel(i);
        return out;
    }

    std::exception_ptr failure;
    const auto n = static_cast<long long>(trials);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(misolab_trial_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Number of fixed chunks used by reduce_trials; depends only on `trials`.
inline std::size_t chunk_count(std::size_t trials) { return std::min<std::size_t>(trials, 256); }

/**
 * Folds kernel(acc, i) over all trials.
 *
 * Parallel path: trials are split into chunk_count(trials) contiguous chunks,
 * each folded from a copy of `init`, and the chunk accumulators are merged in
 * chunk order. The chunking is a function of the trial count alone, so the
 * result is bit-identical for any thread count.
 *
 * Serial path: one accumulator, one pass in index order. It agrees with the
 * parallel path up to floating-point reassociation.
 */
template <class Acc, class Kernel, class Merge>
Acc reduce_trials(std::size_t trials, const Acc& init, Kernel&& kernel, Merge&& merge,
                  Execution exec = Execution::Parallel) {
    if (exec == Execution::Serial) {
        Acc acc = init;
        for (std::size_t i = 0; i < trials; ++i) kernel(acc, i);
        return acc;
    }

    const std::size_t chunks = chunk_count(trials);
    std::vector<Acc> partial(chunks, init);
    std::exception_ptr failure;
    const auto nchunks = static_cast<long long>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < nchunks; ++c) {
        const std::size_t begin = trials * static_cast<std::size_t>(c) / chunks;
        const std::size_t end = trials * (static_cast<std::size_t>(c) + 1) / chunks;
        try {
            for (std::size_t i = begin; i < end; ++i) kernel(partial[static_cast<std::size_t>(c)], i);
        } catch (...) {
#pragma omp critical(misolab_trial_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    Acc acc = init;
    for (const auto& p : partial) merge(acc, p);
    return acc;
}

}  // namespace misolab
