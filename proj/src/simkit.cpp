#include "divekit/simkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace divekit {

void ChannelConfig::validate() const {
    if (num_blocks < 1) throw ValidationError("channel: num_blocks must be >= 1");
    if (snr_db.empty()) throw ValidationError("channel: SNR grid is empty");
    for (std::size_t i = 1; i < snr_db.size(); ++i)
        if (snr_db[i] <= snr_db[i - 1])
            throw ValidationError("channel: SNR grid must be strictly increasing");
}

std::vector<double> transmit(const std::vector<std::uint8_t>& codeword,
                             const std::vector<int>& block_of_bit, double snr_linear,
                             int num_blocks, Rng& rng) {
    if (codeword.size() != block_of_bit.size())
        throw ValidationError("transmit: codeword/block map length mismatch");
    const double n0 = 1.0 / snr_linear;
    const double sigma = std::sqrt(n0 / 2.0);  // per-dimension noise deviation

    // one CN(0,1) coefficient per fading block for this codeword
    std::vector<double> h_re(num_blocks), h_im(num_blocks);
    for (int m = 0; m < num_blocks; ++m) {
        h_re[m] = rng.next_gaussian() * 0.7071067811865476;
        h_im[m] = rng.next_gaussian() * 0.7071067811865476;
    }

    std::vector<double> llr(codeword.size(), 0.0);
    for (std::size_t i = 0; i < codeword.size(); ++i) {
        const int m = block_of_bit[i];
        if (m < 0) continue;  // punctured: no channel observation
        const double s = codeword[i] ? -1.0 : 1.0;
        const double y_re = h_re[m] * s + rng.next_gaussian() * sigma;
        const double y_im = h_im[m] * s + rng.next_gaussian() * sigma;
        // coherent matched filter: 4 Re(h* y) / N0
        llr[i] = 4.0 * (h_re[m] * y_re + h_im[m] * y_im) / n0;
    }
    return llr;
}

namespace {

/// Flooding min-sum decoder with the Tanner adjacency flattened once per code.
class MinSumDecoder {
  public:
    explicit MinSumDecoder(const LiftedCode& code) : code_(code) {
        row_begin_.reserve(code.n_rows + 1);
        row_begin_.push_back(0);
        for (const auto& cols : code.row_cols) {
            for (const int c : cols) edge_col_.push_back(c);
            row_begin_.push_back(static_cast<int>(edge_col_.size()));
        }
        col_edges_.resize(code.n_cols);
        for (int r = 0; r < code.n_rows; ++r)
            for (int t = row_begin_[r]; t < row_begin_[r + 1]; ++t)
                col_edges_[edge_col_[t]].push_back(t);
        alpha_.resize(edge_col_.size());
        beta_.assign(edge_col_.size(), 0.0);
        posterior_.resize(code.n_cols);
        hard_.resize(code.n_cols);
    }

    DecodeResult decode(const std::vector<double>& llr, const DecoderConfig& dcfg) {
        if (static_cast<int>(llr.size()) != code_.n_cols)
            throw ValidationError("decode: LLR length must be " + std::to_string(code_.n_cols));
        if (dcfg.max_iters < 1) throw ValidationError("decode: max_iters must be >= 1");
        if (dcfg.scaling <= 0.0 || dcfg.scaling > 1.0)
            throw ValidationError("decode: scaling must be in (0, 1]");

        const auto clamp = [](double v) {
            return std::clamp(v, -kLlrSaturation, kLlrSaturation);
        };
        for (std::size_t e = 0; e < alpha_.size(); ++e) alpha_[e] = 0.0;
        for (int c = 0; c < code_.n_cols; ++c)
            for (const int e : col_edges_[c]) alpha_[e] = clamp(llr[c]);

        DecodeResult res;
        for (int iter = 1; iter <= dcfg.max_iters; ++iter) {
            // check pass: sign product and two smallest magnitudes
            for (int r = 0; r < code_.n_rows; ++r) {
                double min1 = kLlrSaturation, min2 = kLlrSaturation;
                int argmin = -1;
                int sign = 0;  // parity of negative inputs
                for (int t = row_begin_[r]; t < row_begin_[r + 1]; ++t) {
                    const double v = alpha_[t];
                    const double mag = std::fabs(v);
                    if (v < 0.0) sign ^= 1;
                    if (mag < min1) {
                        min2 = min1;
                        min1 = mag;
                        argmin = t;
                    } else if (mag < min2) {
                        min2 = mag;
                    }
                }
                for (int t = row_begin_[r]; t < row_begin_[r + 1]; ++t) {
                    const double mag = (t == argmin) ? min2 : min1;
                    const int s = sign ^ (alpha_[t] < 0.0 ? 1 : 0);
                    beta_[t] = dcfg.scaling * (s ? -mag : mag);
                }
            }
            // variable pass and a-posteriori decisions
            for (int c = 0; c < code_.n_cols; ++c) {
                double sum = 0.0;
                for (const int e : col_edges_[c]) sum += beta_[e];
                posterior_[c] = llr[c] + sum;
                hard_[c] = posterior_[c] < 0.0 ? 1 : 0;  // ties decide bit 0
                for (const int e : col_edges_[c]) alpha_[e] = clamp(posterior_[c] - beta_[e]);
            }
            res.iterations_used = iter;
            if (dcfg.early_stop && code_.syndrome_ok(hard_)) {
                res.converged = true;
                break;
            }
        }
        if (!res.converged && dcfg.early_stop) res.converged = code_.syndrome_ok(hard_);
        if (!dcfg.early_stop) res.converged = code_.syndrome_ok(hard_);
        res.hard = hard_;
        return res;
    }

  private:
    const LiftedCode& code_;
    std::vector<int> row_begin_, edge_col_;
    std::vector<std::vector<int>> col_edges_;
    std::vector<double> alpha_, beta_, posterior_;
    std::vector<std::uint8_t> hard_;
};

}  // namespace

DecodeResult min_sum_decode(const LiftedCode& code, const std::vector<double>& llr,
                            const DecoderConfig& dcfg) {
    MinSumDecoder decoder(code);
    return decoder.decode(llr, dcfg);
}

SimResult run_bler(const LiftedCode& code, const std::vector<int>& block_of_bit,
                   const ChannelConfig& ccfg, const DecoderConfig& dcfg, const BlerOptions& opt) {
    ccfg.validate();
    if (opt.trials_per_point < 1) throw ValidationError("run_bler: trials_per_point must be >= 1");
    if (static_cast<int>(block_of_bit.size()) != code.n_cols)
        throw ValidationError("run_bler: block map does not match the lifted code");
    const int threads = std::max(1, opt.threads);

    std::optional<Encoder> encoder;
    if (opt.random_data) encoder.emplace(code);

    // outcome of one trial, stored per index so aggregation order is fixed
    struct Outcome {
        std::uint8_t block_error;
        std::int32_t bit_errors;
    };

    SimResult results;
    for (std::size_t point = 0; point < ccfg.snr_db.size(); ++point) {
        const auto t0 = std::chrono::steady_clock::now();
        const double snr = std::pow(10.0, ccfg.snr_db[point] / 10.0);

        auto run_trial = [&](std::int64_t trial, MinSumDecoder& decoder) -> Outcome {
            Rng rng(derive_stream(opt.seed, point, static_cast<std::uint64_t>(trial)));
            std::vector<std::uint8_t> codeword;
            if (opt.random_data) {
                std::vector<std::uint8_t> info(code.info_bits);
                for (auto& b : info) b = static_cast<std::uint8_t>(rng.next_u64() & 1);
                codeword = encoder->encode(info);
            } else {
                codeword.assign(code.n_cols, 0);
            }
            const auto llr = transmit(codeword, block_of_bit, snr, ccfg.num_blocks, rng);
            const auto dec = decoder.decode(llr, dcfg);
            std::int32_t bit_errors = 0;
            for (int c = 0; c < code.info_bits; ++c)
                if (dec.hard[c] != codeword[c]) ++bit_errors;
            return {static_cast<std::uint8_t>(bit_errors > 0), bit_errors};
        };

        PointResult pr;
        pr.snr_db = ccfg.snr_db[point];
        pr.seed = opt.seed;

        const std::int64_t wave = std::max<std::int64_t>(256, 64 * threads);
        std::vector<Outcome> outcomes(static_cast<std::size_t>(wave));
        std::int64_t done = 0;
        bool stopped = false;
        while (done < opt.trials_per_point && !stopped) {
            const std::int64_t count = std::min(wave, opt.trials_per_point - done);
            if (threads == 1) {
                MinSumDecoder decoder(code);
                for (std::int64_t t = 0; t < count; ++t)
                    outcomes[static_cast<std::size_t>(t)] = run_trial(done + t, decoder);
            } else {
                std::vector<std::thread> pool;
                for (int w = 0; w < threads; ++w)
                    pool.emplace_back([&, w] {
                        MinSumDecoder decoder(code);
                        for (std::int64_t t = w; t < count; t += threads)
                            outcomes[static_cast<std::size_t>(t)] = run_trial(done + t, decoder);
                    });
                for (auto& th : pool) th.join();
            }
            for (std::int64_t t = 0; t < count; ++t) {
                const auto& o = outcomes[static_cast<std::size_t>(t)];
                ++pr.trials;
                pr.block_errors += o.block_error;
                pr.info_bit_errors += o.bit_errors;
                if (opt.stop_at_errors > 0 && pr.block_errors >= opt.stop_at_errors) {
                    stopped = true;
                    break;
                }
            }
            done += count;
        }

        pr.bler = static_cast<double>(pr.block_errors) / static_cast<double>(pr.trials);
        pr.ber = static_cast<double>(pr.info_bit_errors) /
                 (static_cast<double>(pr.trials) * code.info_bits);
        const double half =
            1.959963984540054 * std::sqrt(std::max(0.0, pr.bler * (1.0 - pr.bler) /
                                                            static_cast<double>(pr.trials)));
        pr.ci_low = std::max(0.0, pr.bler - half);
        pr.ci_high = std::min(1.0, pr.bler + half);
        pr.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results.push_back(pr);
    }
    return results;
}

double estimate_diversity_slope(const SimResult& results, std::int64_t min_errors) {
    std::vector<double> xs, ys;
    for (const auto& pr : results) {
        if (pr.block_errors < std::max<std::int64_t>(1, min_errors)) continue;
        xs.push_back(pr.snr_db / 10.0);  // log10 of linear SNR
        ys.push_back(-std::log10(pr.bler));
    }
    if (xs.size() < 2)
        throw ValidationError("slope estimate needs >= 2 points with >= " +
                              std::to_string(min_errors) + " block errors");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

void write_results_csv(const std::string& path, const SimResult& results) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write results csv: " + path);
    out << "snr_db,trials,block_errors,bler,ci_low,ci_high,seed\n";
    char buf[256];
    for (const auto& pr : results) {
        std::snprintf(buf, sizeof buf, "%.6g,%lld,%lld,%.8e,%.8e,%.8e,%llu\n", pr.snr_db,
                      static_cast<long long>(pr.trials), static_cast<long long>(pr.block_errors),
                      pr.bler, pr.ci_low, pr.ci_high,
                      static_cast<unsigned long long>(pr.seed));
        out << buf;
    }
}

}  // namespace divekit
