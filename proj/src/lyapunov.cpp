#include <cmath>
#include <random>

#include "chaoslab/errors.hpp"
#include "chaoslab/parallel.hpp"
#include "chaoslab/stability.hpp"

namespace chaoslab {

LyapunovEstimate lyapunov_mc(const MatrixSystem& sys, std::size_t samples, std::uint64_t horizon,
                             std::uint64_t seed) {
    if (samples < 1 || horizon < 1) throw InvalidInput("lyapunov_mc needs samples >= 1 and horizon >= 1");
    std::vector<double> rates(samples);
    parallel_for(samples, [&](std::size_t i) {
        // One independent stream per sample keeps results independent of the
        // number of workers.
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32U)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<int> pick(1, sys.size());
        LogScaledMatrix p = LogScaledMatrix::identity(sys.dim());
        for (std::uint64_t n = 0; n < horizon; ++n) p = p.left_multiplied(sys[pick(rng)]);
        rates[i] = p.log_op_norm() / static_cast<double>(horizon);
    });

    LyapunovEstimate est;
    est.samples = samples;
    est.horizon = horizon;
    est.seed = seed;
    double sum = 0.0;
    for (double r : rates) sum += r;
    est.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - est.mean) * (r - est.mean);
        est.stderr_mean = std::sqrt(ss / static_cast<double>(samples - 1) / static_cast<double>(samples));
    }
    return est;
}

}  // namespace chaoslab
