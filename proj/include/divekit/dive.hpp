#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divekit/base_graph.hpp"
#include "divekit/block_mapping.hpp"
#include "divekit/fading.hpp"

namespace divekit {

/// A check node acting as a generalized rootcheck: during the check update of
/// `iteration`, every incoming message other than the target's was either the
/// single-block atom A_block or the full-diversity function, with
/// block != pi(target). The target's output at `iteration` therefore
/// dominates A_pi(target) + A_block.
struct RootcheckEvent {
    int iteration;
    int cn;
    int target_vn;
    int block;
};

struct DiveReport {
    int num_blocks = 0;
    int iters = 0;                 // requested iteration budget
    int fixpoint_iteration = -1;   // first iteration whose tables equal the previous ones
    int first_full_iteration = -1; // first iteration with every info VN at full diversity

    /// Per-VN output functions per iteration (0 = channel initialization).
    /// Stored up to the fixpoint; use function_at() for later iterations.
    std::vector<std::vector<FadingFunction>> per_iteration;
    std::vector<int> diversity_orders;       // per active column, final iteration
    std::vector<int> full_div_count_info;    // [0..iters], info VNs at full diversity
    std::vector<RootcheckEvent> rootcheck_events;  // first occurrence per (cn, vn, block)

    const FadingFunction& function_at(int iteration, int col) const;
    int full_count_at(int iteration) const;
    bool all_info_full(int info_cols) const;

    /// One VN per line: index, role, transmitted flag, final table hex,
    /// diversity order.
    void write_report(const std::string& path, const BaseGraph& bg, const RateSelection& sel) const;
    /// CSV `iter,count_full_div_info`.
    void write_iteration_csv(const std::string& path) const;
};

/// Per-edge message functions at one iteration; edges are indexed per the
/// engine's expanded edge list (parallel edges are separate instances).
/// alpha holds the VN-to-CN functions of this iteration, beta the CN-to-VN
/// functions computed on the way there (empty at initialization).
struct MessageState {
    int iteration = 0;
    std::vector<FadingFunction> alpha;
    std::vector<FadingFunction> beta;
};

/// Message-passing engine over the active protograph where messages are
/// whole 2^M-entry truth tables. Per-realization evaluation (fading_msd) and
/// symbolic evaluation share this code path by construction.
class DiveEngine {
  public:
    DiveEngine(const BaseGraph& bg, const RateSelection& sel);

    struct Options {
        int iters = 20;
        bool record_tables = true;      // keep per-iteration output functions
        bool detect_rootchecks = true;  // collect RootcheckEvents
    };

    DiveReport run(const BlockMapping& mapping, const Options& opt);

    /// FadingMSD for one realization: per-VN recoverability bits after the
    /// final iteration, extracted from the table run.
    std::vector<std::uint8_t> fading_msd(const BlockMapping& mapping,
                                         const FadingRealization& realization, int iters);

    MessageState initial_state(const BlockMapping& mapping) const;
    void step(const BlockMapping& mapping, MessageState& state) const;
    std::vector<FadingFunction> outputs(const BlockMapping& mapping,
                                        const MessageState& state) const;

    int edge_count() const { return static_cast<int>(edge_col_.size()); }
    int active_cols() const { return active_cols_; }
    int active_rows() const { return active_rows_; }
    int info_cols() const { return info_cols_; }
    int edge_col(int e) const { return edge_col_[e]; }
    int edge_row(int e) const { return edge_row_[e]; }

  private:
    friend std::vector<RootcheckEvent> detect_generalized_rootchecks(const DiveEngine&,
                                                                     const MessageState&,
                                                                     const BlockMapping&);
    int active_cols_, active_rows_, info_cols_;
    std::vector<int> edge_col_, edge_row_;       // expanded edge instances
    std::vector<std::vector<int>> row_edges_, col_edges_;
    std::vector<std::uint8_t> punctured_;        // per active column

    void check_mapping(const BlockMapping& mapping) const;
};

/// Definition-2 scan of a message state: all (cn, target, block) triples where
/// every other incoming message is A_block or full diversity, block different
/// from the target's own block (any block for punctured targets). The
/// returned events carry the state's iteration index.
std::vector<RootcheckEvent> detect_generalized_rootchecks(const DiveEngine& engine,
                                                          const MessageState& state,
                                                          const BlockMapping& mapping);

/// Diversity evolution: runs FadingMSD symbolically over all 2^M realizations
/// at once and assembles per-iteration truth tables, diversity orders, the
/// full-diversity info-VN counts and rootcheck events.
DiveReport dive_run(const BaseGraph& bg, const RateSelection& sel, const BlockMapping& mapping,
                    int num_blocks, int iters);

std::vector<std::uint8_t> fading_msd(const BaseGraph& bg, const RateSelection& sel,
                                     const BlockMapping& mapping,
                                     const FadingRealization& realization, int iters);

}  // namespace divekit
