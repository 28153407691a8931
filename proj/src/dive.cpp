#include "divekit/dive.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace divekit {

namespace {

std::size_t words_for(int num_blocks) {
    return num_blocks <= 6 ? 1 : (std::size_t{1} << (num_blocks - 6));
}

std::uint64_t tail_mask(int num_blocks) {
    return num_blocks >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (1u << num_blocks)) - 1);
}

}  // namespace

const FadingFunction& DiveReport::function_at(int iteration, int col) const {
    const int last = static_cast<int>(per_iteration.size()) - 1;
    if (last < 0) throw ValidationError("DiveReport: tables were not recorded");
    return per_iteration[std::clamp(iteration, 0, last)][col];
}

int DiveReport::full_count_at(int iteration) const {
    const int last = static_cast<int>(full_div_count_info.size()) - 1;
    return full_div_count_info[std::clamp(iteration, 0, last)];
}

bool DiveReport::all_info_full(int info_cols) const {
    return first_full_iteration >= 0 && full_count_at(iters) == info_cols;
}

void DiveReport::write_report(const std::string& path, const BaseGraph& bg,
                              const RateSelection& sel) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write report file: " + path);
    out << "# vn role transmitted table_hex diversity_order\n";
    const auto& final_fns = per_iteration.back();
    for (int c = 0; c < sel.active_cols; ++c) {
        out << 'v' << c << ' ' << (c < bg.info_cols() ? "info" : "parity") << ' '
            << (bg.is_punctured(c) ? 'p' : 't') << ' ' << final_fns[c].to_hex() << ' '
            << diversity_orders[c] << '\n';
    }
}

void DiveReport::write_iteration_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write iteration csv: " + path);
    out << "iter,count_full_div_info\n";
    for (int l = 0; l <= iters; ++l) out << l << ',' << full_count_at(l) << '\n';
}

DiveEngine::DiveEngine(const BaseGraph& bg, const RateSelection& sel)
    : active_cols_(sel.active_cols), active_rows_(sel.active_rows), info_cols_(bg.info_cols()) {
    row_edges_.resize(active_rows_);
    col_edges_.resize(active_cols_);
    for (const auto& [key, spec] : bg.entries()) {
        const auto [j, i] = key;
        if (j >= active_rows_ || i >= active_cols_) continue;
        for (int m = 0; m < spec.multiplicity; ++m) {
            const int e = static_cast<int>(edge_col_.size());
            edge_col_.push_back(i);
            edge_row_.push_back(j);
            row_edges_[j].push_back(e);
            col_edges_[i].push_back(e);
        }
    }
    punctured_.resize(active_cols_, 0);
    for (const int p : bg.punctured_cols())
        if (p < active_cols_) punctured_[p] = 1;
}

void DiveEngine::check_mapping(const BlockMapping& mapping) const {
    if (mapping.active_cols() != active_cols_)
        throw ValidationError("mapping covers " + std::to_string(mapping.active_cols()) +
                              " columns, engine has " + std::to_string(active_cols_));
    if (mapping.num_blocks < 1 || mapping.num_blocks > FadingFunction::kMaxBlocks)
        throw ValidationError("mapping: block count over cap (1..16)");
    for (int c = 0; c < active_cols_; ++c) {
        const auto b = mapping.assign[c];
        if (b >= mapping.num_blocks)
            throw ValidationError("mapping block out of range at column " + std::to_string(c));
        if (punctured_[c] && b != BlockMapping::kNotTransmitted)
            throw ValidationError("mapping assigns a block to punctured column " +
                                  std::to_string(c));
    }
}

DiveReport DiveEngine::run(const BlockMapping& mapping, const Options& opt) {
    check_mapping(mapping);
    const int M = mapping.num_blocks;
    const std::size_t W = words_for(M);
    const std::uint64_t tail = tail_mask(M);
    const int E = edge_count();

    // channel atoms as raw tables; unassigned or punctured columns get the
    // constant-zero atom
    std::vector<std::uint64_t> atom_words(static_cast<std::size_t>(M) * W, 0);
    for (int m = 0; m < M; ++m) {
        const auto fn = FadingFunction::atom(M, m);
        std::copy(fn.words().begin(), fn.words().end(), atom_words.begin() + m * W);
    }
    std::vector<std::uint64_t> ones_words(W, ~std::uint64_t{0});
    ones_words.back() &= tail;
    ones_words[0] &= tail;
    std::vector<std::uint64_t> full_words = ones_words;
    full_words[0] &= ~std::uint64_t{1};  // full diversity: everything but all-faded

    auto atom_of = [&](int col) -> const std::uint64_t* {
        static const std::vector<std::uint64_t> zeros(1024, 0);
        const auto b = mapping.assign[col];
        return b < 0 ? zeros.data() : atom_words.data() + static_cast<std::size_t>(b) * W;
    };

    std::vector<std::uint64_t> alpha(static_cast<std::size_t>(E) * W);
    std::vector<std::uint64_t> beta(static_cast<std::size_t>(E) * W);
    std::vector<std::uint64_t> out(static_cast<std::size_t>(active_cols_) * W);
    std::vector<std::uint64_t> prev_alpha;

    std::size_t max_deg = 1;
    for (const auto& re : row_edges_) max_deg = std::max(max_deg, re.size());
    for (const auto& ce : col_edges_) max_deg = std::max(max_deg, ce.size());
    std::vector<std::uint64_t> prefix((max_deg + 1) * W), suffix((max_deg + 1) * W);

    for (int e = 0; e < E; ++e)
        std::memcpy(&alpha[e * W], atom_of(edge_col_[e]), W * 8);
    for (int c = 0; c < active_cols_; ++c)
        std::memcpy(&out[c * W], atom_of(c), W * 8);

    DiveReport report;
    report.num_blocks = M;
    report.iters = opt.iters;

    const auto is_full = [&](const std::uint64_t* t) {
        return std::memcmp(t, full_words.data(), W * 8) == 0;
    };
    auto count_full_info = [&]() {
        int n = 0;
        for (int c = 0; c < info_cols_; ++c)
            if (is_full(&out[c * W])) ++n;
        return n;
    };
    auto record_iteration = [&]() {
        if (!opt.record_tables) return;
        auto& fns = report.per_iteration.emplace_back();
        fns.reserve(active_cols_);
        for (int c = 0; c < active_cols_; ++c) {
            FadingFunction f(M);
            std::copy(&out[c * W], &out[c * W + W], f.words().begin());
            fns.push_back(std::move(f));
        }
    };

    report.full_div_count_info.push_back(count_full_info());
    record_iteration();
    if (report.full_div_count_info[0] == info_cols_) report.first_full_iteration = 0;

    // first-occurrence filter for (cn, vn, block) rootcheck triples
    std::vector<std::uint8_t> seen_event;
    std::vector<int> kind;  // per edge: -2 other, -1 full, m >= 0 atom
    if (opt.detect_rootchecks) {
        seen_event.assign(static_cast<std::size_t>(active_rows_) * active_cols_ * M, 0);
        kind.resize(E);
    }

    for (int iter = 1; iter <= opt.iters; ++iter) {
        if (opt.detect_rootchecks) {
            // classify the VN->CN messages this check update consumes
            for (int e = 0; e < E; ++e) {
                const std::uint64_t* t = &alpha[e * W];
                if (is_full(t)) {
                    kind[e] = -1;
                    continue;
                }
                kind[e] = -2;
                for (int m = 0; m < M; ++m)
                    if (std::memcmp(t, atom_words.data() + static_cast<std::size_t>(m) * W,
                                    W * 8) == 0) {
                        kind[e] = m;
                        break;
                    }
            }
            for (int j = 0; j < active_rows_; ++j) {
                const auto& edges = row_edges_[j];
                int n_other = 0, n_full = 0;
                int atom_count[FadingFunction::kMaxBlocks] = {0};
                for (const int e : edges) {
                    if (kind[e] == -2) ++n_other;
                    else if (kind[e] == -1) ++n_full;
                    else ++atom_count[kind[e]];
                }
                if (n_other > 1) continue;
                for (const int e : edges) {
                    const int i = edge_col_[e];
                    const int others_other = n_other - (kind[e] == -2 ? 1 : 0);
                    if (others_other > 0) continue;
                    int uniq = -1, n_atom_kinds = 0;
                    for (int m = 0; m < M; ++m) {
                        const int cnt = atom_count[m] - (kind[e] == m ? 1 : 0);
                        if (cnt > 0) { uniq = m; ++n_atom_kinds; }
                    }
                    if (n_atom_kinds > 1) continue;
                    const int pi = mapping.assign[i];
                    int m_star = uniq;
                    if (m_star < 0) {
                        // all other messages are full diversity: any block
                        // different from the target's qualifies
                        m_star = (pi == 0) ? 1 : 0;
                        if (M < 2 && pi == 0) continue;
                    }
                    if (m_star == pi) continue;
                    auto& flag = seen_event[(static_cast<std::size_t>(j) * active_cols_ + i) * M +
                                            m_star];
                    if (!flag) {
                        flag = 1;
                        report.rootcheck_events.push_back({iter, j, i, m_star});
                    }
                }
            }
        }

        // check-node pass: extrinsic AND per edge instance; the empty product
        // (degree-1 check) is the all-true table
        for (int j = 0; j < active_rows_; ++j) {
            const auto& edges = row_edges_[j];
            const std::size_t d = edges.size();
            std::memcpy(&prefix[0], ones_words.data(), W * 8);
            std::memcpy(&suffix[d * W], ones_words.data(), W * 8);
            for (std::size_t t = 0; t < d; ++t)
                for (std::size_t w = 0; w < W; ++w)
                    prefix[(t + 1) * W + w] = prefix[t * W + w] & alpha[edges[t] * W + w];
            for (std::size_t t = d; t-- > 0;)
                for (std::size_t w = 0; w < W; ++w)
                    suffix[t * W + w] = suffix[(t + 1) * W + w] & alpha[edges[t] * W + w];
            for (std::size_t t = 0; t < d; ++t)
                for (std::size_t w = 0; w < W; ++w)
                    beta[edges[t] * W + w] = prefix[t * W + w] & suffix[(t + 1) * W + w];
        }

        // variable-node pass: channel atom OR extrinsic OR; outputs use all
        // incoming messages
        if (prev_alpha.empty()) prev_alpha.resize(alpha.size());
        std::swap(prev_alpha, alpha);
        for (int c = 0; c < active_cols_; ++c) {
            const auto& edges = col_edges_[c];
            const std::size_t d = edges.size();
            const std::uint64_t* base = atom_of(c);
            std::memcpy(&prefix[0], base, W * 8);
            std::memcpy(&suffix[d * W], base, W * 8);
            for (std::size_t t = 0; t < d; ++t)
                for (std::size_t w = 0; w < W; ++w)
                    prefix[(t + 1) * W + w] = prefix[t * W + w] | beta[edges[t] * W + w];
            for (std::size_t t = d; t-- > 0;)
                for (std::size_t w = 0; w < W; ++w)
                    suffix[t * W + w] = suffix[(t + 1) * W + w] | beta[edges[t] * W + w];
            for (std::size_t t = 0; t < d; ++t)
                for (std::size_t w = 0; w < W; ++w)
                    alpha[edges[t] * W + w] = prefix[t * W + w] | suffix[(t + 1) * W + w];
            std::memcpy(&out[c * W], &prefix[d * W], W * 8);
        }

        report.full_div_count_info.push_back(count_full_info());
        record_iteration();
        if (report.first_full_iteration < 0 &&
            report.full_div_count_info.back() == info_cols_)
            report.first_full_iteration = iter;

        if (std::memcmp(alpha.data(), prev_alpha.data(), alpha.size() * 8) == 0) {
            report.fixpoint_iteration = iter;
            // tables cannot change further; extend the count series
            for (int l = iter + 1; l <= opt.iters; ++l)
                report.full_div_count_info.push_back(report.full_div_count_info.back());
            break;
        }
    }

    report.diversity_orders.resize(active_cols_);
    for (int c = 0; c < active_cols_; ++c) {
        FadingFunction f(M);
        std::copy(&out[c * W], &out[c * W + W], f.words().begin());
        report.diversity_orders[c] = f.diversity_order();
    }
    return report;
}

std::vector<std::uint8_t> DiveEngine::fading_msd(const BlockMapping& mapping,
                                                 const FadingRealization& realization, int iters) {
    if (static_cast<int>(realization.bits.size()) != mapping.num_blocks)
        throw ValidationError("fading_msd: realization length must equal num_blocks");
    for (int c = 0; c < active_cols_; ++c)
        if (!punctured_[c] && mapping.assign[c] == BlockMapping::kNotTransmitted)
            throw ValidationError("fading_msd: unmapped transmitted column " + std::to_string(c));
    Options opt;
    opt.iters = iters;
    opt.record_tables = true;
    opt.detect_rootchecks = false;
    const DiveReport report = run(mapping, opt);
    const std::uint32_t a = realization.index();
    std::vector<std::uint8_t> bits(active_cols_);
    for (int c = 0; c < active_cols_; ++c) bits[c] = report.function_at(iters, c).bit(a);
    return bits;
}

MessageState DiveEngine::initial_state(const BlockMapping& mapping) const {
    check_mapping(mapping);
    MessageState st;
    st.iteration = 0;
    st.alpha.reserve(edge_count());
    for (int e = 0; e < edge_count(); ++e) {
        const auto b = mapping.assign[edge_col_[e]];
        st.alpha.push_back(b < 0 ? FadingFunction::zero(mapping.num_blocks)
                                 : FadingFunction::atom(mapping.num_blocks, b));
    }
    return st;
}

void DiveEngine::step(const BlockMapping& mapping, MessageState& state) const {
    const int M = mapping.num_blocks;
    std::vector<FadingFunction> beta(edge_count());
    for (int j = 0; j < active_rows_; ++j) {
        const auto& edges = row_edges_[j];
        for (const int e : edges) {
            FadingFunction acc = FadingFunction::all_ones(M);
            for (const int e2 : edges)
                if (e2 != e) acc &= state.alpha[e2];
            beta[e] = std::move(acc);
        }
    }
    for (int c = 0; c < active_cols_; ++c) {
        const auto b = mapping.assign[c];
        const FadingFunction base =
            b < 0 ? FadingFunction::zero(M) : FadingFunction::atom(M, b);
        const auto& edges = col_edges_[c];
        for (const int e : edges) {
            FadingFunction acc = base;
            for (const int e2 : edges)
                if (e2 != e) acc |= beta[e2];
            state.alpha[e] = std::move(acc);
        }
    }
    state.beta = std::move(beta);
    ++state.iteration;
}

std::vector<FadingFunction> DiveEngine::outputs(const BlockMapping& mapping,
                                                const MessageState& state) const {
    const int M = mapping.num_blocks;
    std::vector<FadingFunction> out;
    out.reserve(active_cols_);
    for (int c = 0; c < active_cols_; ++c) {
        const auto b = mapping.assign[c];
        FadingFunction acc = b < 0 ? FadingFunction::zero(M) : FadingFunction::atom(M, b);
        if (!state.beta.empty())
            for (const int e : col_edges_[c]) acc |= state.beta[e];
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<RootcheckEvent> detect_generalized_rootchecks(const DiveEngine& engine,
                                                          const MessageState& state,
                                                          const BlockMapping& mapping) {
    const int M = mapping.num_blocks;
    const auto full = FadingFunction::full_diversity(M);
    std::vector<FadingFunction> atoms;
    for (int m = 0; m < M; ++m) atoms.push_back(FadingFunction::atom(M, m));

    std::vector<RootcheckEvent> events;
    for (int j = 0; j < engine.active_rows_; ++j) {
        const auto& edges = engine.row_edges_[j];
        // kind per edge: -2 other, -1 full, m atom
        std::vector<int> kind(edges.size(), -2);
        for (std::size_t t = 0; t < edges.size(); ++t) {
            const auto& f = state.alpha[edges[t]];
            if (f == full) {
                kind[t] = -1;
                continue;
            }
            for (int m = 0; m < M; ++m)
                if (f == atoms[m]) {
                    kind[t] = m;
                    break;
                }
        }
        for (std::size_t t = 0; t < edges.size(); ++t) {
            const int i = engine.edge_col_[edges[t]];
            int uniq = -1;
            bool ok = true, multiple = false;
            for (std::size_t t2 = 0; t2 < edges.size() && ok; ++t2) {
                if (t2 == t) continue;
                if (kind[t2] == -2) ok = false;
                else if (kind[t2] >= 0) {
                    if (uniq >= 0 && uniq != kind[t2]) multiple = true;
                    uniq = kind[t2];
                }
            }
            if (!ok || multiple) continue;
            const int pi = mapping.assign[i];
            int m_star = uniq;
            if (m_star < 0) {
                m_star = (pi == 0) ? 1 : 0;
                if (M < 2 && pi == 0) continue;
            }
            if (m_star == pi) continue;
            events.push_back({state.iteration, j, i, m_star});
        }
    }
    return events;
}

DiveReport dive_run(const BaseGraph& bg, const RateSelection& sel, const BlockMapping& mapping,
                    int num_blocks, int iters) {
    if (num_blocks != mapping.num_blocks)
        throw ValidationError("dive_run: num_blocks disagrees with the mapping");
    if (num_blocks < 1 || num_blocks > FadingFunction::kMaxBlocks)
        throw ValidationError("dive_run: num_blocks over cap (1..16)");
    validate_mapping(bg, sel, mapping);
    DiveEngine engine(bg, sel);
    DiveEngine::Options opt;
    opt.iters = iters;
    return engine.run(mapping, opt);
}

std::vector<std::uint8_t> fading_msd(const BaseGraph& bg, const RateSelection& sel,
                                     const BlockMapping& mapping,
                                     const FadingRealization& realization, int iters) {
    DiveEngine engine(bg, sel);
    return engine.fading_msd(mapping, realization, iters);
}

}  // namespace divekit
