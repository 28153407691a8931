#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace divekit {

/// Monotone Boolean function of M per-block fading indicators, stored as a
/// 2^M-entry truth table packed into 64-bit words. Index a is the integer
/// encoding of the realization vector (bit m of a = indicator of block m).
class FadingFunction {
  public:
    static constexpr int kMaxBlocks = 16;

    FadingFunction() = default;
    explicit FadingFunction(int num_blocks);

    static FadingFunction zero(int num_blocks) { return FadingFunction(num_blocks); }
    static FadingFunction all_ones(int num_blocks);
    /// The channel atom A_m: true iff block m is not in deep fade.
    static FadingFunction atom(int num_blocks, int block);
    /// A_0 + ... + A_{M-1}: true for every realization except all-faded.
    static FadingFunction full_diversity(int num_blocks);

    int num_blocks() const { return num_blocks_; }
    std::uint32_t table_size() const { return 1u << num_blocks_; }

    bool bit(std::uint32_t realization) const {
        return (words_[realization >> 6] >> (realization & 63)) & 1u;
    }
    void set_bit(std::uint32_t realization, bool value);

    FadingFunction& operator&=(const FadingFunction& other);
    FadingFunction& operator|=(const FadingFunction& other);
    friend FadingFunction operator&(FadingFunction a, const FadingFunction& b) { return a &= b; }
    friend FadingFunction operator|(FadingFunction a, const FadingFunction& b) { return a |= b; }
    friend bool operator==(const FadingFunction& a, const FadingFunction& b) {
        return a.num_blocks_ == b.num_blocks_ && a.words_ == b.words_;
    }

    bool is_zero() const;
    /// Full diversity: f(a) = 1 for every a with at least one good block.
    bool is_full_diversity() const;
    /// True iff the function equals some atom A_m; stores m in *block.
    bool is_atom(int* block = nullptr) const;
    /// Componentwise monotone: a <= a' implies f(a) <= f(a').
    bool is_monotone() const;

    /// Diversity order: the minimum number of faded blocks over failing
    /// realizations (f(a) = 0). Constant-zero gives 0; a function with no
    /// failing realization (degree-1 check artifact) gives M.
    int diversity_order() const;

    std::string to_hex() const;
    static FadingFunction from_hex(int num_blocks, const std::string& hex);

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

  private:
    int num_blocks_ = 0;
    std::vector<std::uint64_t> words_;
};

/// One concrete fading realization a in {0,1}^M. The underlying indicator
/// model is A_m = 1{|h_m|^2 * snr >= rho_0}; the threshold rho_0 never enters
/// the Boolean analysis, only the realization bits do.
struct FadingRealization {
    std::vector<std::uint8_t> bits;

    std::uint32_t index() const {
        std::uint32_t a = 0;
        for (std::size_t m = 0; m < bits.size(); ++m)
            if (bits[m]) a |= 1u << m;
        return a;
    }
    static FadingRealization from_index(int num_blocks, std::uint32_t a);
};

FadingFunction ff_and(const FadingFunction& f, const FadingFunction& g);
FadingFunction ff_or(const FadingFunction& f, const FadingFunction& g);
int diversity_order(const FadingFunction& f);

}  // namespace divekit
