#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "divekit/rational.hpp"

namespace divekit {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One base-matrix entry: parallel-edge count and per-edge circulant shifts.
struct EdgeSpec {
    int multiplicity = 1;
    std::vector<int> shifts;  // length == multiplicity, each in [0, Z)
};

/// Protograph base matrix with edge multiplicities, circulant shift values,
/// and column roles (information / parity / punctured). Immutable after
/// construction; safe to share across threads.
class BaseGraph {
  public:
    BaseGraph(int rows, int cols, int info_cols, int lifting_size,
              std::vector<int> punctured_cols,
              std::map<std::pair<int, int>, EdgeSpec> entries);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int info_cols() const { return info_cols_; }
    int lifting_size() const { return lifting_size_; }
    const std::vector<int>& punctured_cols() const { return punctured_; }
    bool is_punctured(int col) const;

    const std::map<std::pair<int, int>, EdgeSpec>& entries() const { return entries_; }
    const EdgeSpec* edge(int row, int col) const;
    /// Columns adjacent to a row / rows adjacent to a column (each listed once).
    const std::vector<int>& row_cols(int row) const { return row_cols_[row]; }
    const std::vector<int>& col_rows(int col) const { return col_rows_[col]; }

    /// Parses the text base-graph format; verifies an embedded checksum line
    /// when present and the 5G-NR shape assertions for known dimensions.
    static BaseGraph load(const std::string& path, int lifting_size);
    void save(const std::string& path) const;

    /// Header plus canonically ordered edge lines; checksum input and the
    /// round-trip serialization payload.
    std::string canonical_payload() const;
    std::uint64_t checksum() const;

    friend bool operator==(const BaseGraph& a, const BaseGraph& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.info_cols_ == b.info_cols_ &&
               a.lifting_size_ == b.lifting_size_ && a.punctured_ == b.punctured_ &&
               a.entries_ == b.entries_;
    }

  private:
    int rows_, cols_, info_cols_, lifting_size_;
    std::vector<int> punctured_;
    std::map<std::pair<int, int>, EdgeSpec> entries_;
    std::vector<std::vector<int>> row_cols_, col_rows_;
};

inline bool operator==(const EdgeSpec& a, const EdgeSpec& b) {
    return a.multiplicity == b.multiplicity && a.shifts == b.shifts;
}

/// Contiguous-prefix rate selection: the leading active_cols columns and
/// active_rows rows, following the 5G parity-extension order.
struct RateSelection {
    int active_cols = 0;
    int active_rows = 0;
    Rational rate;  // info_cols / transmitted active columns
};

RateSelection select_rate(const BaseGraph& bg, int parity_cols);

/// Number of transmitted (non-punctured) columns in the selection.
int transmitted_cols(const BaseGraph& bg, const RateSelection& sel);

/// Smallest parity_cols whose rate is <= the requested rate.
int parity_cols_for_rate(const BaseGraph& bg, const Rational& target);

/// All unordered active-column pairs whose active-row neighborhoods are
/// identical (multiplicity ignored; edge presence only).
std::vector<std::pair<int, int>> identical_neighborhood_pairs(const BaseGraph& bg,
                                                              const RateSelection& sel);

/// Singleton-like diversity bound 1 + floor(M * (1 - R)), evaluated exactly.
int singleton_bound(int num_blocks, const Rational& rate);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace divekit
