#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "divekit/base_graph.hpp"
#include "divekit/block_mapping.hpp"
#include "divekit/dive.hpp"
#include "divekit/rng.hpp"

namespace divekit {

/// Two-block partial assignment used by the mapping search. Tracks not-equal
/// relations (pre-assignment 1) in a parity union-find so that assigning one
/// column propagates through its whole relation component, plus per-block
/// population caps when balanced completion is requested.
class PartialMapping {
  public:
    static constexpr std::int8_t kUnassigned = -2;
    static constexpr std::int8_t kPunctured = -1;

    PartialMapping(const BaseGraph& bg, const RateSelection& sel, bool balanced);

    int active_cols() const { return static_cast<int>(assign_.size()); }
    std::int8_t at(int col) const { return assign_[col]; }
    bool assigned(int col) const { return assign_[col] >= 0; }
    int unassigned_count() const;
    const std::array<int, 2>& populations() const { return pop_; }

    /// Adds a not-equal relation; false if it closes an odd cycle.
    bool add_not_equal(int a, int b);
    bool can_assign(int col, int block) const;
    /// Assigns col (and its relation component); false on contradiction or
    /// population-cap overflow, in which case nothing changes.
    bool assign(int col, int block);

    /// View as a BlockMapping where unassigned columns are treated like
    /// untransmitted ones (constant-zero channel atoms).
    BlockMapping as_block_mapping() const;
    /// Full mapping; throws if any transmitted column is unassigned.
    BlockMapping to_complete_mapping() const;

  private:
    std::vector<std::int8_t> assign_;
    std::array<int, 2> pop_{0, 0};
    int cap_;
    // union-find with edge parity; forced_ pins the block of a root's
    // even-parity side once its component is materialized
    mutable std::vector<int> parent_;
    mutable std::vector<std::uint8_t> parity_;
    std::vector<std::int8_t> forced_;
    std::vector<std::vector<int>> members_;

    std::pair<int, int> find(int v) const;
};

struct SearchConfig {
    int max_trials = 200;   // greedy trials per pre-assignment candidate
    int iters = 20;         // DivE budget per feasibility test / certification
    std::uint64_t rng_seed = 0;
    bool balanced = true;
    std::optional<int> start_parity_cols;  // default: smallest with rate <= 1/2
    std::optional<int> max_parity_cols;
    int max_pre3 = 8;        // accepted pre-assignment-3 expansions per parent
    int max_local_bits = 8;  // cap on 2^u local assignments per check node
};

struct SearchResult {
    BlockMapping mapping;
    Rational rate;
    int parity_cols = 0;
    int iterations_to_full = 0;
    std::int64_t trials_used = 0;
    int candidate_index = 0;
};

struct SearchFail {
    int best_info_full = 0;       // best certified full-diversity info count seen
    std::int64_t trials_used = 0;
    std::vector<int> unfilled;    // columns left unassigned in the best attempt
    std::string reason;
};

using SearchOutcome = std::variant<SearchResult, SearchFail>;

/// Pre-assignment 1, stopping-set prevention: a fresh partial mapping with a
/// not-equal relation per identical-neighborhood pair. nullopt when the
/// relations are contradictory (odd cycle).
std::optional<PartialMapping> pre_assign_1(const BaseGraph& bg, const RateSelection& sel,
                                           bool balanced);

/// Pre-assignment 2: enumerates block tuples over the first four parity
/// columns (modulo the global block swap) and propagates per check node in
/// row order; conflicting adoption demands leave columns unassigned.
std::vector<PartialMapping> pre_assign_2(const BaseGraph& bg, const RateSelection& sel,
                                         const PartialMapping& base);

/// Pre-assignment 3: for each punctured column picks an ordered pair of
/// adjacent check nodes whose other transmitted neighbors are pinned to
/// blocks 0 and 1 respectively, so the punctured VN receives both atoms.
/// Enumerates pair choices lazily in a seed-shuffled deterministic order,
/// skipping choices that contradict existing constraints.
std::vector<PartialMapping> pre_assign_3(const BaseGraph& bg, const RateSelection& sel,
                                         const PartialMapping& candidate, std::uint64_t rng_seed,
                                         int max_candidates, int screen_iters = 20);

struct GreedyDiagnostics {
    int certified_info_full = 0;
    std::vector<int> unfilled;
};

/// Generalized-rootcheck greedy completion of one candidate. Returns the
/// completed mapping when the final DivE certification reaches full diversity
/// on every information VN within cfg.iters, otherwise nullopt.
std::optional<BlockMapping> greedy_complete(const BaseGraph& bg, const RateSelection& sel,
                                            DiveEngine& engine, const PartialMapping& start,
                                            const SearchConfig& cfg, Rng& rng,
                                            GreedyDiagnostics* diag = nullptr);

/// Algorithm: starting from the highest diversity-feasible rate, enumerate
/// pre-assignment candidates and greedy trials; on exhaustion include one
/// more parity column and repeat.
SearchOutcome search_da_mapping(const BaseGraph& bg, const SearchConfig& cfg);

/// Uniformly random assignment of the transmitted columns (balanced when
/// requested); deterministic per seed.
BlockMapping random_mapping(const BaseGraph& bg, const RateSelection& sel, int num_blocks,
                            std::uint64_t seed, bool balanced);

}  // namespace divekit
