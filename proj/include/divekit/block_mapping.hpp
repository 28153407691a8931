#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divekit/base_graph.hpp"
#include "divekit/rational.hpp"

namespace divekit {

/// Assignment of each active transmitted column to one fading block.
/// Punctured columns carry kNotTransmitted.
struct BlockMapping {
    static constexpr std::int8_t kNotTransmitted = -1;

    int num_blocks = 0;
    std::vector<std::int8_t> assign;  // one entry per active column

    int active_cols() const { return static_cast<int>(assign.size()); }
    bool transmitted(int col) const { return assign[col] != kNotTransmitted; }

    /// Transmitted-column count per block.
    std::vector<int> populations() const;
    /// Populations differ by at most one.
    bool is_balanced() const;

    friend bool operator==(const BlockMapping& a, const BlockMapping& b) {
        return a.num_blocks == b.num_blocks && a.assign == b.assign;
    }
};

/// Optional summary metadata carried in the mapping file header.
struct MappingMeta {
    std::optional<Rational> rate;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> trials_used;
};

void save_mapping(const std::string& path, const BlockMapping& mapping,
                  const MappingMeta& meta = {});
std::pair<BlockMapping, MappingMeta> load_mapping(const std::string& path);

/// Checks the mapping against a graph selection: punctured columns and only
/// those are unmapped, and block indices are in range.
void validate_mapping(const BaseGraph& bg, const RateSelection& sel, const BlockMapping& mapping);

}  // namespace divekit
