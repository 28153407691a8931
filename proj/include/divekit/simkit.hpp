#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divekit/qclift.hpp"
#include "divekit/rng.hpp"

namespace divekit {

/// Rayleigh block-fading channel with BPSK and coherent detection.
/// SNR convention: snr = Es/N0 per transmitted symbol with E[|h|^2] = 1.
struct ChannelConfig {
    int num_blocks = 2;
    std::vector<double> snr_db;  // strictly increasing

    void validate() const;
};

struct DecoderConfig {
    int max_iters = 50;
    bool early_stop = true;  // stop on a zero syndrome
    double scaling = 1.0;    // normalized min-sum factor in (0, 1]; 1 = pure min-sum
};

/// Message magnitudes are clamped here; with double LLRs this only guards
/// against pathological inputs (inf/overflow), not normal operation.
inline constexpr double kLlrSaturation = 1e12;

struct PointResult {
    double snr_db = 0;
    std::int64_t trials = 0;
    std::int64_t block_errors = 0;
    std::int64_t info_bit_errors = 0;
    double bler = 0, ber = 0;
    double ci_low = 0, ci_high = 0;  // 95%, normal approximation
    std::uint64_t seed = 0;
    double wall_time_s = 0;
};

using SimResult = std::vector<PointResult>;

/// One channel use: draws one fading coefficient per block and per-bit AWGN,
/// and returns channel LLRs 4*Re(h* y)/N0; punctured bits get LLR 0.
std::vector<double> transmit(const std::vector<std::uint8_t>& codeword,
                             const std::vector<int>& block_of_bit, double snr_linear,
                             int num_blocks, Rng& rng);

struct DecodeResult {
    std::vector<std::uint8_t> hard;
    int iterations_used = 0;
    bool converged = false;
};

/// Flooding min-sum (sign-product / minimum magnitude check update).
DecodeResult min_sum_decode(const LiftedCode& code, const std::vector<double>& llr,
                            const DecoderConfig& dcfg);

struct BlerOptions {
    std::int64_t trials_per_point = 10000;
    std::uint64_t seed = 0;
    std::int64_t stop_at_errors = 100;  // 0 disables early stopping
    int threads = 1;
    bool random_data = false;  // encode random info words instead of all-zero
};

/// Monte Carlo BLER/BER over the SNR grid. Per-trial RNG streams are derived
/// from (seed, point, trial), and the stopping trial is the smallest index
/// whose error count reaches the threshold, so results are bit-identical for
/// any thread count.
SimResult run_bler(const LiftedCode& code, const std::vector<int>& block_of_bit,
                   const ChannelConfig& ccfg, const DecoderConfig& dcfg, const BlerOptions& opt);

/// Least-squares slope of -log10(BLER) versus log10(snr) over points with at
/// least min_errors block errors; throws if fewer than two qualify.
double estimate_diversity_slope(const SimResult& results, std::int64_t min_errors = 100);

/// CSV: snr_db,trials,block_errors,bler,ci_low,ci_high,seed
void write_results_csv(const std::string& path, const SimResult& results);

}  // namespace divekit
