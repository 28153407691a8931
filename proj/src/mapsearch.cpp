#include "divekit/mapsearch.hpp"

#include <algorithm>
#include <numeric>

namespace divekit {

PartialMapping::PartialMapping(const BaseGraph& bg, const RateSelection& sel, bool balanced)
    : assign_(sel.active_cols, kUnassigned),
      parent_(sel.active_cols),
      parity_(sel.active_cols, 0),
      forced_(sel.active_cols, kUnassigned),
      members_(sel.active_cols) {
    std::iota(parent_.begin(), parent_.end(), 0);
    int transmitted = 0;
    for (int c = 0; c < sel.active_cols; ++c) {
        if (bg.is_punctured(c))
            assign_[c] = kPunctured;
        else {
            ++transmitted;
            members_[c] = {c};
        }
    }
    cap_ = balanced ? (transmitted + 1) / 2 : transmitted;
}

int PartialMapping::unassigned_count() const {
    int n = 0;
    for (const auto a : assign_)
        if (a == kUnassigned) ++n;
    return n;
}

std::pair<int, int> PartialMapping::find(int v) const {
    int p = 0;
    int r = v;
    while (parent_[r] != r) {
        p ^= parity_[r];
        r = parent_[r];
    }
    // path compression, keeping parities consistent
    int cur = v, cur_par = p;
    while (parent_[cur] != cur) {
        const int next = parent_[cur];
        const int next_par = cur_par ^ parity_[cur];
        parent_[cur] = r;
        parity_[cur] = static_cast<std::uint8_t>(cur_par);
        cur = next;
        cur_par = next_par;
    }
    return {r, p};
}

bool PartialMapping::add_not_equal(int a, int b) {
    if (assign_[a] == kPunctured || assign_[b] == kPunctured) return true;  // vacuous
    const auto [ra, pa] = find(a);
    const auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == 1;
    // merge rb into ra with relation parity 1
    const int rel = pa ^ pb ^ 1;
    if (forced_[rb] >= 0 && forced_[ra] >= 0)
        return forced_[rb] == (forced_[ra] ^ rel);
    if (forced_[rb] >= 0 && forced_[ra] < 0) forced_[ra] = forced_[rb] ^ rel;
    parent_[rb] = ra;
    parity_[rb] = static_cast<std::uint8_t>(rel);
    auto& ma = members_[ra];
    ma.insert(ma.end(), members_[rb].begin(), members_[rb].end());
    members_[rb].clear();
    // a freshly forced component materializes immediately
    if (forced_[ra] >= 0)
        for (const int u : ma) {
            const auto [ru, pu] = find(u);
            assign_[u] = static_cast<std::int8_t>(forced_[ra] ^ pu);
        }
    return true;
}

bool PartialMapping::can_assign(int col, int block) const {
    if (block < 0 || block > 1) return false;
    if (assign_[col] == kPunctured) return false;
    if (assign_[col] >= 0) return assign_[col] == block;
    const auto [r, p] = find(col);
    const int root_block = block ^ p;
    if (forced_[r] >= 0) return forced_[r] == root_block;
    // count what materializing the component would add to each block
    int add[2] = {0, 0};
    for (const int u : members_[r]) {
        const auto pu = find(u).second;
        ++add[root_block ^ pu];
    }
    return pop_[0] + add[0] <= cap_ && pop_[1] + add[1] <= cap_;
}

bool PartialMapping::assign(int col, int block) {
    if (!can_assign(col, block)) return false;
    if (assign_[col] >= 0) return true;  // already materialized consistently
    const auto [r, p] = find(col);
    forced_[r] = static_cast<std::int8_t>(block ^ p);
    for (const int u : members_[r]) {
        const auto pu = find(u).second;
        const int b = forced_[r] ^ pu;
        assign_[u] = static_cast<std::int8_t>(b);
        ++pop_[b];
    }
    return true;
}

BlockMapping PartialMapping::as_block_mapping() const {
    BlockMapping bm;
    bm.num_blocks = 2;
    bm.assign.resize(assign_.size());
    for (std::size_t c = 0; c < assign_.size(); ++c)
        bm.assign[c] = assign_[c] < 0 ? BlockMapping::kNotTransmitted : assign_[c];
    return bm;
}

BlockMapping PartialMapping::to_complete_mapping() const {
    for (std::size_t c = 0; c < assign_.size(); ++c)
        if (assign_[c] == kUnassigned)
            throw ValidationError("partial mapping: column " + std::to_string(c) +
                                  " still unassigned");
    return as_block_mapping();
}

std::optional<PartialMapping> pre_assign_1(const BaseGraph& bg, const RateSelection& sel,
                                           bool balanced) {
    PartialMapping pm(bg, sel, balanced);
    for (const auto& [a, b] : identical_neighborhood_pairs(bg, sel))
        if (!pm.add_not_equal(a, b)) return std::nullopt;
    return pm;
}

std::vector<PartialMapping> pre_assign_2(const BaseGraph& bg, const RateSelection& sel,
                                         const PartialMapping& base) {
    const int k = bg.info_cols();
    const int parity_cols = sel.active_cols - k;
    const int core = std::min(4, parity_cols);

    std::vector<PartialMapping> out;
    // first core column fixed to block 0: removes the global block swap
    for (int tuple = 0; tuple < (1 << std::max(0, core - 1)); ++tuple) {
        PartialMapping pm = base;
        bool ok = true;
        for (int t = 0; t < core && ok; ++t) {
            const int block = t == 0 ? 0 : (tuple >> (t - 1)) & 1;
            ok = pm.assign(k + t, block);
        }
        if (!ok) continue;
        // row-order propagation: unassigned parity neighbors adopt the block
        // of already-assigned parity neighbors; conflicts leave them alone
        for (int j = 0; j < sel.active_rows; ++j) {
            int seen_block = -1;
            bool conflict = false;
            for (const int i : bg.row_cols(j)) {
                if (i < k || i >= sel.active_cols || !pm.assigned(i)) continue;
                if (seen_block < 0) seen_block = pm.at(i);
                else if (seen_block != pm.at(i)) conflict = true;
            }
            if (seen_block < 0 || conflict) continue;
            for (const int i : bg.row_cols(j)) {
                if (i < k || i >= sel.active_cols || pm.at(i) != PartialMapping::kUnassigned)
                    continue;
                pm.assign(i, seen_block);  // skipped silently when contradictory
            }
        }
        out.push_back(std::move(pm));
    }
    return out;
}

std::vector<PartialMapping> pre_assign_3(const BaseGraph& bg, const RateSelection& sel,
                                         const PartialMapping& candidate, std::uint64_t rng_seed,
                                         int max_candidates, int screen_iters) {
    std::vector<int> punctured;
    for (const int p : bg.punctured_cols())
        if (p < sel.active_cols) punctured.push_back(p);
    if (punctured.empty()) return {candidate};

    // ordered CN pairs per punctured column, enumerated in a seed-shuffled
    // deterministic order
    std::vector<std::vector<std::pair<int, int>>> pair_lists;
    for (const int pv : punctured) {
        std::vector<int> rows;
        for (const int j : bg.col_rows(pv))
            if (j < sel.active_rows) rows.push_back(j);
        if (rows.size() < 2) return {};  // cannot receive both atoms
        std::vector<std::pair<int, int>> pairs;
        for (const int a : rows)
            for (const int b : rows)
                if (a != b) pairs.emplace_back(a, b);
        Rng rng(derive_stream(rng_seed, 0x70333, pv));
        rng.shuffle(pairs);
        pair_lists.push_back(std::move(pairs));
    }

    DiveEngine engine(bg, sel);
    std::vector<PartialMapping> out;
    std::vector<std::size_t> odo(punctured.size(), 0);
    bool exhausted = false;
    while (!exhausted && static_cast<int>(out.size()) < max_candidates) {
        PartialMapping pm = candidate;
        bool ok = true;
        for (std::size_t v = 0; v < punctured.size() && ok; ++v) {
            const auto [ca, cb] = pair_lists[v][odo[v]];
            for (int side = 0; side < 2 && ok; ++side) {
                const int cn = side == 0 ? ca : cb;
                for (const int i : bg.row_cols(cn)) {
                    if (i >= sel.active_cols || i == punctured[v] ||
                        pm.at(i) == PartialMapping::kPunctured)
                        continue;
                    if (!pm.assign(i, side)) {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if (ok) {
            // functional screen: the chosen pairs must actually make every
            // punctured VN full diversity in the restricted evolution
            DiveEngine::Options opt;
            opt.iters = screen_iters;
            opt.record_tables = false;
            opt.detect_rootchecks = false;
            const DiveReport report = engine.run(pm.as_block_mapping(), opt);
            for (const int pv : punctured)
                if (report.diversity_orders[pv] != 2) {
                    ok = false;
                    break;
                }
        }
        if (ok) out.push_back(std::move(pm));
        // advance the odometer
        std::size_t v = 0;
        while (v < odo.size()) {
            if (++odo[v] < pair_lists[v].size()) break;
            odo[v] = 0;
            ++v;
        }
        if (v == odo.size()) exhausted = true;
    }
    return out;
}

namespace {

// Feasibility of one local assignment: after applying it, CN j forms a
// generalized rootcheck whose target is an information VN that reaches full
// diversity in the restricted DivE run (unassigned columns as constant-zero)
// and was not full before the assignment.
bool local_assignment_feasible(DiveEngine& engine, const PartialMapping& pm, int cn,
                               const std::vector<std::uint8_t>& already_full, int info_cols,
                               int iters) {
    DiveEngine::Options opt;
    opt.iters = iters;
    opt.record_tables = false;
    opt.detect_rootchecks = true;
    const DiveReport report = engine.run(pm.as_block_mapping(), opt);
    for (const auto& ev : report.rootcheck_events)
        if (ev.cn == cn && ev.target_vn < info_cols &&
            report.diversity_orders[ev.target_vn] == report.num_blocks)
            return true;
    (void)already_full;
    return false;
}

}  // namespace

std::optional<BlockMapping> greedy_complete(const BaseGraph& bg, const RateSelection& sel,
                                            DiveEngine& engine, const PartialMapping& start,
                                            const SearchConfig& cfg, Rng& rng,
                                            GreedyDiagnostics* diag) {
    PartialMapping pm = start;
    const int k = bg.info_cols();

    while (pm.unassigned_count() > 0) {
        // info VNs already aligned by the current partial state
        std::vector<std::uint8_t> already_full(k, 0);
        {
            DiveEngine::Options opt;
            opt.iters = cfg.iters;
            opt.record_tables = false;
            opt.detect_rootchecks = false;
            const DiveReport now = engine.run(pm.as_block_mapping(), opt);
            for (int c = 0; c < k; ++c)
                already_full[c] = now.diversity_orders[c] == now.num_blocks;
        }

        // group check nodes by their number of unassigned neighbor columns
        std::vector<std::pair<int, int>> groups;  // (u, cn), u > 0
        for (int j = 0; j < sel.active_rows; ++j) {
            int u = 0;
            int last = -1;
            for (const int i : bg.row_cols(j)) {
                if (i >= sel.active_cols || i == last) continue;
                last = i;
                if (pm.at(i) == PartialMapping::kUnassigned) ++u;
            }
            if (u > 0) groups.emplace_back(u, j);
        }
        std::sort(groups.begin(), groups.end());

        bool applied = false;
        for (std::size_t g = 0; g < groups.size() && !applied; ++g) {
            const auto [u, j] = groups[g];
            if (u > cfg.max_local_bits) break;  // groups only grow from here
            std::vector<int> vars;
            for (const int i : bg.row_cols(j))
                if (i < sel.active_cols && pm.at(i) == PartialMapping::kUnassigned &&
                    (vars.empty() || vars.back() != i))
                    vars.push_back(i);

            std::vector<std::uint32_t> feasible;
            for (std::uint32_t bits = 0; bits < (1u << vars.size()); ++bits) {
                PartialMapping trial = pm;
                bool ok = true;
                for (std::size_t t = 0; t < vars.size() && ok; ++t)
                    ok = trial.assign(vars[t], (bits >> t) & 1u);
                if (ok && local_assignment_feasible(engine, trial, j, already_full, k, cfg.iters))
                    feasible.push_back(bits);
            }
            if (feasible.empty()) continue;
            const std::uint32_t pick =
                feasible[static_cast<std::size_t>(rng.next_below(feasible.size()))];
            for (std::size_t t = 0; t < vars.size(); ++t)
                pm.assign(vars[t], (pick >> t) & 1u);
            applied = true;
        }
        if (!applied) break;  // no group yields a feasible assignment
    }

    // The greedy phase must have aligned every information VN by itself; a
    // stall before that is a failed attempt. Unassigned leftovers beyond this
    // point are parity tails that no longer matter for alignment.
    {
        DiveEngine::Options opt;
        opt.iters = cfg.iters;
        opt.record_tables = false;
        opt.detect_rootchecks = false;
        const DiveReport aligned = engine.run(pm.as_block_mapping(), opt);
        if (aligned.full_div_count_info.back() != k) {
            if (diag) {
                diag->certified_info_full =
                    std::max(diag->certified_info_full, aligned.full_div_count_info.back());
                for (int c = 0; c < pm.active_cols(); ++c)
                    if (pm.at(c) == PartialMapping::kUnassigned) diag->unfilled.push_back(c);
            }
            return std::nullopt;
        }
    }

    // random fill of whatever the greedy phase left open
    std::vector<int> open;
    for (int c = 0; c < pm.active_cols(); ++c)
        if (pm.at(c) == PartialMapping::kUnassigned) open.push_back(c);
    rng.shuffle(open);
    for (const int c : open) {
        if (pm.at(c) != PartialMapping::kUnassigned) continue;  // filled via a relation
        int options[2];
        int n_opt = 0;
        for (int b = 0; b < 2; ++b)
            if (pm.can_assign(c, b)) options[n_opt++] = b;
        if (n_opt == 0) {
            if (diag) {
                diag->certified_info_full = 0;
                for (int c2 = 0; c2 < pm.active_cols(); ++c2)
                    if (pm.at(c2) == PartialMapping::kUnassigned) diag->unfilled.push_back(c2);
            }
            return std::nullopt;
        }
        pm.assign(c, options[n_opt == 1 ? 0 : static_cast<int>(rng.next_below(2))]);
    }

    const BlockMapping mapping = pm.to_complete_mapping();
    DiveEngine::Options opt;
    opt.iters = cfg.iters;
    opt.record_tables = false;
    opt.detect_rootchecks = false;
    const DiveReport cert = engine.run(mapping, opt);
    const int full = cert.full_div_count_info.back();
    if (diag) diag->certified_info_full = std::max(diag->certified_info_full, full);
    if (full != k) return std::nullopt;
    return mapping;
}

SearchOutcome search_da_mapping(const BaseGraph& bg, const SearchConfig& cfg) {
    if (cfg.max_trials < 1 || cfg.iters < 1)
        throw ValidationError("search: max_trials and iters must be >= 1");
    const int start =
        cfg.start_parity_cols.value_or(parity_cols_for_rate(bg, Rational(1, 2)));
    const int maxp = cfg.max_parity_cols.value_or(bg.rows());
    if (start < 0 || maxp > bg.rows() || start > maxp)
        throw ValidationError("search: bad parity-column range");

    std::int64_t trials_total = 0;
    int cand_idx = 0;
    SearchFail fail;

    for (int p = start; p <= maxp; ++p) {
        const RateSelection sel = select_rate(bg, p);
        if (singleton_bound(2, sel.rate) < 2) continue;  // rate above 1/2
        // the block model sends exactly N/M bits per block, so a balanced
        // column mapping needs the transmitted count divisible by M
        if (cfg.balanced && transmitted_cols(bg, sel) % 2 != 0) continue;
        const auto base = pre_assign_1(bg, sel, cfg.balanced);
        if (!base) continue;  // contradictory twin constraints at this rate
        DiveEngine engine(bg, sel);

        for (const auto& pm2 : pre_assign_2(bg, sel, *base)) {
            for (const auto& pm3 : pre_assign_3(bg, sel, pm2, cfg.rng_seed, cfg.max_pre3)) {
                for (int t = 0; t < cfg.max_trials; ++t) {
                    Rng rng(derive_stream(cfg.rng_seed, static_cast<std::uint64_t>(p),
                                          static_cast<std::uint64_t>(cand_idx),
                                          static_cast<std::uint64_t>(t)));
                    ++trials_total;
                    GreedyDiagnostics diag;
                    const auto mapping = greedy_complete(bg, sel, engine, pm3, cfg, rng, &diag);
                    fail.best_info_full = std::max(fail.best_info_full, diag.certified_info_full);
                    if (fail.unfilled.empty() && !diag.unfilled.empty())
                        fail.unfilled = diag.unfilled;
                    if (!mapping) continue;

                    // independent re-certification plus pre-assignment-1 audit
                    const DiveReport report = dive_run(bg, sel, *mapping, 2, cfg.iters);
                    if (!report.all_info_full(bg.info_cols())) continue;
                    bool twins_ok = true;
                    for (const auto& [a, b] : identical_neighborhood_pairs(bg, sel)) {
                        if (mapping->assign[a] < 0 || mapping->assign[b] < 0) continue;
                        if (mapping->assign[a] == mapping->assign[b]) twins_ok = false;
                    }
                    if (!twins_ok) continue;

                    SearchResult result;
                    result.mapping = *mapping;
                    result.rate = sel.rate;
                    result.parity_cols = p;
                    result.iterations_to_full = report.first_full_iteration;
                    result.trials_used = trials_total;
                    result.candidate_index = cand_idx;
                    return result;
                }
                ++cand_idx;
            }
        }
    }
    fail.trials_used = trials_total;
    fail.reason = "trial budget exhausted without a certified mapping";
    return fail;
}

BlockMapping random_mapping(const BaseGraph& bg, const RateSelection& sel, int num_blocks,
                            std::uint64_t seed, bool balanced) {
    if (num_blocks < 1 || num_blocks > FadingFunction::kMaxBlocks)
        throw ValidationError("random_mapping: num_blocks over cap (1..16)");
    BlockMapping bm;
    bm.num_blocks = num_blocks;
    bm.assign.assign(sel.active_cols, BlockMapping::kNotTransmitted);
    std::vector<int> tx;
    for (int c = 0; c < sel.active_cols; ++c)
        if (!bg.is_punctured(c)) tx.push_back(c);

    Rng rng(seed);
    if (!balanced) {
        for (const int c : tx) bm.assign[c] = static_cast<std::int8_t>(rng.next_below(num_blocks));
        return bm;
    }
    // balanced pool: base count per block, remainder to seed-chosen blocks
    std::vector<std::int8_t> pool;
    const int base = static_cast<int>(tx.size()) / num_blocks;
    for (int b = 0; b < num_blocks; ++b)
        pool.insert(pool.end(), base, static_cast<std::int8_t>(b));
    std::vector<std::int8_t> extras;
    for (int b = 0; b < num_blocks; ++b) extras.push_back(static_cast<std::int8_t>(b));
    rng.shuffle(extras);
    for (std::size_t r = 0; r < tx.size() - pool.size(); ++r) pool.push_back(extras[r]);
    rng.shuffle(pool);
    for (std::size_t t = 0; t < tx.size(); ++t) bm.assign[tx[t]] = pool[t];
    return bm;
}

}  // namespace divekit
