#include "divekit/fading.hpp"

#include <bit>
#include <stdexcept>

namespace divekit {

namespace {

int check_blocks(int num_blocks) {
    if (num_blocks < 1 || num_blocks > FadingFunction::kMaxBlocks)
        throw std::invalid_argument("FadingFunction: num_blocks must be in [1, 16]");
    return num_blocks;
}

// Number of 64-bit words holding 2^M bits.
std::size_t word_count(int num_blocks) {
    return num_blocks <= 6 ? 1 : (std::size_t{1} << (num_blocks - 6));
}

// Mask of the valid bits in the last (here: only) partial word.
std::uint64_t tail_mask(int num_blocks) {
    return num_blocks >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1u << num_blocks)) - 1);
}

}  // namespace

FadingFunction::FadingFunction(int num_blocks)
    : num_blocks_(check_blocks(num_blocks)), words_(word_count(num_blocks), 0) {}

FadingFunction FadingFunction::all_ones(int num_blocks) {
    FadingFunction f(num_blocks);
    for (auto& w : f.words_) w = ~std::uint64_t{0};
    f.words_.back() &= tail_mask(num_blocks);
    f.words_[0] &= tail_mask(num_blocks);
    return f;
}

FadingFunction FadingFunction::atom(int num_blocks, int block) {
    check_blocks(num_blocks);
    if (block < 0 || block >= num_blocks)
        throw std::invalid_argument("FadingFunction::atom: block out of range");
    FadingFunction f(num_blocks);
    for (std::uint32_t a = 0; a < f.table_size(); ++a)
        if (a & (1u << block)) f.set_bit(a, true);
    return f;
}

FadingFunction FadingFunction::full_diversity(int num_blocks) {
    FadingFunction f = all_ones(num_blocks);
    f.set_bit(0, false);
    return f;
}

void FadingFunction::set_bit(std::uint32_t realization, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (realization & 63);
    if (value)
        words_[realization >> 6] |= mask;
    else
        words_[realization >> 6] &= ~mask;
}

FadingFunction& FadingFunction::operator&=(const FadingFunction& other) {
    if (num_blocks_ != other.num_blocks_)
        throw std::invalid_argument("FadingFunction: mismatched block counts");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
    return *this;
}

FadingFunction& FadingFunction::operator|=(const FadingFunction& other) {
    if (num_blocks_ != other.num_blocks_)
        throw std::invalid_argument("FadingFunction: mismatched block counts");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
}

bool FadingFunction::is_zero() const {
    for (const auto w : words_)
        if (w) return false;
    return true;
}

bool FadingFunction::is_full_diversity() const {
    return !bit(0) && diversity_order() == num_blocks_;
}

bool FadingFunction::is_atom(int* block) const {
    for (int m = 0; m < num_blocks_; ++m) {
        if (*this == atom(num_blocks_, m)) {
            if (block) *block = m;
            return true;
        }
    }
    return false;
}

bool FadingFunction::is_monotone() const {
    for (std::uint32_t a = 0; a < table_size(); ++a) {
        if (!bit(a)) continue;
        // f(a)=1 must imply f(a')=1 for every superset a'; check covers only.
        for (int m = 0; m < num_blocks_; ++m)
            if (!(a & (1u << m)) && !bit(a | (1u << m))) return false;
    }
    return true;
}

int FadingFunction::diversity_order() const {
    int best = num_blocks_ + 1;
    for (std::uint32_t a = 0; a < table_size(); ++a) {
        if (bit(a)) continue;
        const int faded = num_blocks_ - std::popcount(a);
        if (faded < best) best = faded;
    }
    return best > num_blocks_ ? num_blocks_ : best;
}

std::string FadingFunction::to_hex() const {
    static const char* digits = "0123456789abcdef";
    const std::uint32_t nibbles = (table_size() + 3) / 4;
    std::string out(nibbles, '0');
    for (std::uint32_t a = 0; a < table_size(); ++a)
        if (bit(a)) {
            const std::uint32_t nib = a / 4;
            char& c = out[nibbles - 1 - nib];
            int v = (c <= '9') ? c - '0' : c - 'a' + 10;
            v |= 1 << (a % 4);
            c = digits[v];
        }
    return out;
}

FadingFunction FadingFunction::from_hex(int num_blocks, const std::string& hex) {
    FadingFunction f(num_blocks);
    const std::uint32_t nibbles = (f.table_size() + 3) / 4;
    if (hex.size() != nibbles)
        throw std::invalid_argument("FadingFunction::from_hex: wrong digit count");
    for (std::uint32_t nib = 0; nib < nibbles; ++nib) {
        const char c = hex[nibbles - 1 - nib];
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw std::invalid_argument("FadingFunction::from_hex: bad digit");
        for (int b = 0; b < 4; ++b) {
            const std::uint32_t a = nib * 4 + b;
            if (a < f.table_size() && (v >> b & 1)) f.set_bit(a, true);
        }
    }
    return f;
}

FadingRealization FadingRealization::from_index(int num_blocks, std::uint32_t a) {
    FadingRealization r;
    r.bits.resize(num_blocks);
    for (int m = 0; m < num_blocks; ++m) r.bits[m] = (a >> m) & 1u;
    return r;
}

FadingFunction ff_and(const FadingFunction& f, const FadingFunction& g) { return f & g; }
FadingFunction ff_or(const FadingFunction& f, const FadingFunction& g) { return f | g; }
int diversity_order(const FadingFunction& f) { return f.diversity_order(); }

}  // namespace divekit
