#include "divekit/qclift.hpp"

#include <algorithm>
#include <fstream>

namespace divekit {

int LiftedCode::transmitted_bits() const {
    int n = 0;
    for (const auto p : punctured)
        if (!p) ++n;
    return n;
}

bool LiftedCode::syndrome_ok(const std::vector<std::uint8_t>& word) const {
    for (const auto& cols : row_cols) {
        int acc = 0;
        for (const int c : cols) acc ^= word[c];
        if (acc) return false;
    }
    return true;
}

LiftedCode lift(const BaseGraph& bg, const RateSelection& sel) {
    LiftedCode code;
    code.z = bg.lifting_size();
    code.n_rows = sel.active_rows * code.z;
    code.n_cols = sel.active_cols * code.z;
    code.info_bits = bg.info_cols() * code.z;
    code.row_cols.resize(code.n_rows);
    for (const auto& [key, spec] : bg.entries()) {
        const auto [j, i] = key;
        if (j >= sel.active_rows || i >= sel.active_cols) continue;
        for (const int s : spec.shifts)
            for (int r = 0; r < code.z; ++r)
                code.row_cols[j * code.z + r].push_back(i * code.z + (r + s) % code.z);
    }
    for (auto& cols : code.row_cols) std::sort(cols.begin(), cols.end());
    code.punctured.assign(code.n_cols, 0);
    for (const int p : bg.punctured_cols())
        if (p < sel.active_cols)
            for (int r = 0; r < code.z; ++r) code.punctured[p * code.z + r] = 1;
    return code;
}

std::vector<int> expand_mapping(const BlockMapping& mapping, int z) {
    if (z < 1) throw ValidationError("expand_mapping: Z must be positive");
    std::vector<int> out(static_cast<std::size_t>(mapping.active_cols()) * z);
    for (int c = 0; c < mapping.active_cols(); ++c)
        for (int r = 0; r < z; ++r) out[c * z + r] = mapping.assign[c];
    return out;
}

Encoder::Encoder(const LiftedCode& code)
    : code_(code), parity_bits_(code.n_cols - code.info_bits) {
    if (parity_bits_ != code.n_rows)
        throw ValidationError("encoder: parity part is not square");
    words_ = (static_cast<std::size_t>(parity_bits_) + 63) / 64;

    // augmented [parity part | identity], then Gauss-Jordan
    const std::size_t stride = 2 * words_;
    std::vector<std::uint64_t> m(static_cast<std::size_t>(parity_bits_) * stride, 0);
    for (int r = 0; r < code.n_rows; ++r) {
        for (const int c : code.row_cols[r])
            if (c >= code.info_bits) {
                const int pc = c - code.info_bits;
                m[r * stride + pc / 64] ^= std::uint64_t{1} << (pc % 64);
            }
        m[r * stride + words_ + r / 64] |= std::uint64_t{1} << (r % 64);
    }
    for (int col = 0; col < parity_bits_; ++col) {
        const std::size_t w = col / 64;
        const std::uint64_t bit = std::uint64_t{1} << (col % 64);
        int pivot = -1;
        for (int r = col; r < parity_bits_; ++r)
            if (m[r * stride + w] & bit) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw ValidationError("encoder: singular parity part");
        if (pivot != col)
            for (std::size_t t = 0; t < stride; ++t)
                std::swap(m[pivot * stride + t], m[col * stride + t]);
        for (int r = 0; r < parity_bits_; ++r) {
            if (r == col || !(m[r * stride + w] & bit)) continue;
            for (std::size_t t = w; t < stride; ++t) m[r * stride + t] ^= m[col * stride + t];
        }
    }
    inverse_.assign(static_cast<std::size_t>(parity_bits_) * words_, 0);
    for (int r = 0; r < parity_bits_; ++r)
        for (std::size_t t = 0; t < words_; ++t)
            inverse_[r * words_ + t] = m[r * stride + words_ + t];
}

std::vector<std::uint8_t> Encoder::encode(const std::vector<std::uint8_t>& info) const {
    if (static_cast<int>(info.size()) != code_.info_bits)
        throw ValidationError("encode: info length must be " + std::to_string(code_.info_bits));
    // syndrome of the systematic part
    std::vector<std::uint64_t> synd(words_, 0);
    for (int r = 0; r < code_.n_rows; ++r) {
        int acc = 0;
        for (const int c : code_.row_cols[r]) {
            if (c >= code_.info_bits) break;  // columns are sorted
            acc ^= info[c];
        }
        if (acc) synd[r / 64] ^= std::uint64_t{1} << (r % 64);
    }
    std::vector<std::uint8_t> word(code_.n_cols, 0);
    std::copy(info.begin(), info.end(), word.begin());
    for (int r = 0; r < parity_bits_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t t = 0; t < words_; ++t) acc ^= inverse_[r * words_ + t] & synd[t];
        word[code_.info_bits + r] = static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
    }
    return word;
}

void write_alist(const LiftedCode& code, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write alist file: " + path);
    std::vector<std::vector<int>> col_rows(code.n_cols);
    for (int r = 0; r < code.n_rows; ++r)
        for (const int c : code.row_cols[r]) col_rows[c].push_back(r);
    std::size_t dc_max = 0, dr_max = 0;
    for (const auto& v : col_rows) dc_max = std::max(dc_max, v.size());
    for (const auto& v : code.row_cols) dr_max = std::max(dr_max, v.size());

    out << code.n_cols << ' ' << code.n_rows << '\n' << dc_max << ' ' << dr_max << '\n';
    for (int c = 0; c < code.n_cols; ++c) out << col_rows[c].size() << (c + 1 < code.n_cols ? ' ' : '\n');
    for (int r = 0; r < code.n_rows; ++r)
        out << code.row_cols[r].size() << (r + 1 < code.n_rows ? ' ' : '\n');
    for (int c = 0; c < code.n_cols; ++c) {
        for (std::size_t t = 0; t < dc_max; ++t)
            out << (t < col_rows[c].size() ? col_rows[c][t] + 1 : 0) << (t + 1 < dc_max ? ' ' : '\n');
    }
    for (int r = 0; r < code.n_rows; ++r) {
        for (std::size_t t = 0; t < dr_max; ++t)
            out << (t < code.row_cols[r].size() ? code.row_cols[r][t] + 1 : 0)
                << (t + 1 < dr_max ? ' ' : '\n');
    }
}

}  // namespace divekit
