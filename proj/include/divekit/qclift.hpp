#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divekit/base_graph.hpp"
#include "divekit/block_mapping.hpp"

namespace divekit {

/// Binary QC-LDPC parity-check matrix obtained by circulant lifting of a
/// rate-selected base graph. Circulant convention: an entry with shift s
/// connects lifted row j*Z+r to lifted column i*Z+((r+s) mod Z).
struct LiftedCode {
    int z = 0;
    int n_rows = 0;  // active_rows * Z
    int n_cols = 0;  // active_cols * Z
    int info_bits = 0;
    std::vector<std::vector<int>> row_cols;  // sorted column indices per row
    std::vector<std::uint8_t> punctured;     // per lifted column

    std::pair<int, int> col_to_proto(int col) const { return {col / z, col % z}; }
    int transmitted_bits() const;
    bool syndrome_ok(const std::vector<std::uint8_t>& word) const;
};

LiftedCode lift(const BaseGraph& bg, const RateSelection& sel);

/// Per-lifted-bit block index; kNotTransmitted for punctured bits.
std::vector<int> expand_mapping(const BlockMapping& mapping, int z);

/// Systematic encoder backed by a one-time GF(2) Gaussian elimination of the
/// parity submatrix. Throws on a singular parity part.
class Encoder {
  public:
    explicit Encoder(const LiftedCode& code);
    std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& info) const;

  private:
    const LiftedCode& code_;
    int parity_bits_;
    std::size_t words_;
    std::vector<std::uint64_t> inverse_;  // row-major dense inverse of the parity part
};

/// alist export (MacKay's sparse matrix interchange format).
void write_alist(const LiftedCode& code, const std::string& path);

}  // namespace divekit
