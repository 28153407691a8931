#include "divekit/block_mapping.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace divekit {

std::vector<int> BlockMapping::populations() const {
    std::vector<int> pop(num_blocks, 0);
    for (const auto b : assign)
        if (b != kNotTransmitted) ++pop[b];
    return pop;
}

bool BlockMapping::is_balanced() const {
    const auto pop = populations();
    const auto [mn, mx] = std::minmax_element(pop.begin(), pop.end());
    return *mx - *mn <= 1;
}

void save_mapping(const std::string& path, const BlockMapping& mapping, const MappingMeta& meta) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write mapping file: " + path);
    out << "# blocks " << mapping.num_blocks << '\n';
    if (meta.rate) out << "# rate " << meta.rate->str() << '\n';
    if (meta.seed) out << "# seed " << *meta.seed << '\n';
    if (meta.trials_used) out << "# trials_used " << *meta.trials_used << '\n';
    for (int c = 0; c < mapping.active_cols(); ++c) {
        out << 'v' << c << ' ';
        if (mapping.assign[c] == BlockMapping::kNotTransmitted)
            out << "P\n";
        else
            out << int(mapping.assign[c]) << '\n';
    }
}

std::pair<BlockMapping, MappingMeta> load_mapping(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mapping file: " + path);

    BlockMapping mapping;
    MappingMeta meta;
    std::vector<std::pair<int, std::int8_t>> rows;
    int max_block = 0;
    std::optional<int> declared_blocks;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;
        if (tok == "#") {
            std::string key, value;
            if (ss >> key >> value) {
                if (key == "rate") meta.rate = Rational::parse(value);
                else if (key == "seed") meta.seed = std::stoull(value);
                else if (key == "trials_used") meta.trials_used = std::stoll(value);
                else if (key == "blocks") declared_blocks = std::stoi(value);
            }
            continue;
        }
        if (tok[0] != 'v')
            throw ParseError("mapping line " + std::to_string(line_no) + ": expected v<index>");
        int idx;
        try {
            idx = std::stoi(tok.substr(1));
        } catch (const std::logic_error&) {
            throw ParseError("mapping line " + std::to_string(line_no) + ": bad index");
        }
        std::string value;
        if (!(ss >> value))
            throw ParseError("mapping line " + std::to_string(line_no) + ": missing block");
        if (value == "P") {
            rows.emplace_back(idx, BlockMapping::kNotTransmitted);
        } else {
            int b;
            try {
                b = std::stoi(value);
            } catch (const std::logic_error&) {
                throw ParseError("mapping line " + std::to_string(line_no) + ": bad block");
            }
            if (b < 0) throw ParseError("mapping line " + std::to_string(line_no) + ": bad block");
            max_block = std::max(max_block, b);
            rows.emplace_back(idx, static_cast<std::int8_t>(b));
        }
    }
    if (rows.empty()) throw ParseError("mapping file has no entries: " + path);

    int max_idx = 0;
    for (const auto& [idx, b] : rows) max_idx = std::max(max_idx, idx);
    mapping.assign.assign(max_idx + 1, BlockMapping::kNotTransmitted);
    std::vector<bool> seen(max_idx + 1, false);
    for (const auto& [idx, b] : rows) {
        if (seen[idx]) throw ParseError("mapping file: duplicate entry v" + std::to_string(idx));
        seen[idx] = true;
        mapping.assign[idx] = b;
    }
    for (int c = 0; c <= max_idx; ++c)
        if (!seen[c]) throw ParseError("mapping file: missing entry v" + std::to_string(c));
    mapping.num_blocks = declared_blocks.value_or(max_block + 1);
    return {mapping, meta};
}

void validate_mapping(const BaseGraph& bg, const RateSelection& sel, const BlockMapping& mapping) {
    if (mapping.active_cols() != sel.active_cols)
        throw ValidationError("mapping covers " + std::to_string(mapping.active_cols()) +
                              " columns, selection has " + std::to_string(sel.active_cols));
    for (int c = 0; c < sel.active_cols; ++c) {
        const bool punct = bg.is_punctured(c);
        const auto b = mapping.assign[c];
        if (punct && b != BlockMapping::kNotTransmitted)
            throw ValidationError("mapping assigns a block to punctured column " +
                                  std::to_string(c));
        if (!punct && b == BlockMapping::kNotTransmitted)
            throw ValidationError("mapping leaves transmitted column " + std::to_string(c) +
                                  " unmapped");
        if (!punct && b >= mapping.num_blocks)
            throw ValidationError("mapping block out of range at column " + std::to_string(c));
    }
}

}  // namespace divekit
