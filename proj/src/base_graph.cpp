#include "divekit/base_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace divekit {

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const unsigned char b : data) {
        h ^= b;
        h *= 0x100000001B3ULL;
    }
    return h;
}

BaseGraph::BaseGraph(int rows, int cols, int info_cols, int lifting_size,
                     std::vector<int> punctured_cols,
                     std::map<std::pair<int, int>, EdgeSpec> entries)
    : rows_(rows),
      cols_(cols),
      info_cols_(info_cols),
      lifting_size_(lifting_size),
      punctured_(std::move(punctured_cols)),
      entries_(std::move(entries)) {
    if (info_cols_ <= 0 || info_cols_ >= cols_)
        throw ValidationError("base graph: need 0 < info_cols < cols");
    if (rows_ != cols_ - info_cols_)
        throw ValidationError("base graph: rows must equal cols - info_cols");
    if (lifting_size_ <= 0) throw ValidationError("base graph: lifting size must be positive");

    std::sort(punctured_.begin(), punctured_.end());
    punctured_.erase(std::unique(punctured_.begin(), punctured_.end()), punctured_.end());
    for (const int p : punctured_)
        if (p < 0 || p >= cols_) throw ValidationError("base graph: punctured column out of range");

    row_cols_.resize(rows_);
    col_rows_.resize(cols_);
    for (const auto& [key, spec] : entries_) {
        const auto [j, i] = key;
        if (j < 0 || j >= rows_ || i < 0 || i >= cols_)
            throw ValidationError("base graph: entry (" + std::to_string(j) + "," +
                                  std::to_string(i) + ") out of range");
        if (spec.multiplicity < 1 ||
            spec.shifts.size() != static_cast<std::size_t>(spec.multiplicity))
            throw ValidationError("base graph: multiplicity/shift mismatch at (" +
                                  std::to_string(j) + "," + std::to_string(i) + ")");
        for (const int s : spec.shifts)
            if (s < 0 || s >= lifting_size_)
                throw ValidationError("base graph: shift " + std::to_string(s) +
                                      " out of range at (" + std::to_string(j) + "," +
                                      std::to_string(i) + ")");
        row_cols_[j].push_back(i);
        col_rows_[i].push_back(j);
    }
    for (int i = 0; i < cols_; ++i)
        if (col_rows_[i].empty())
            throw ValidationError("base graph: disconnected VN (column " + std::to_string(i) + ")");
    for (int j = 0; j < rows_; ++j)
        if (row_cols_[j].empty())
            throw ValidationError("base graph: disconnected CN (row " + std::to_string(j) + ")");

    // 5G-NR shape assertions for the two standardized graphs.
    const bool bg1 = (rows_ == 46 && cols_ == 68);
    const bool bg2 = (rows_ == 42 && cols_ == 52);
    if (bg1 || bg2) {
        const int want_info = bg1 ? 22 : 10;
        if (info_cols_ != want_info)
            throw ValidationError("base graph: 5G-NR shape requires info_cols = " +
                                  std::to_string(want_info));
        if (punctured_ != std::vector<int>{0, 1})
            throw ValidationError("base graph: 5G-NR shape requires punctured columns {0,1}");
        for (const auto& [key, spec] : entries_)
            if (spec.multiplicity != 1)
                throw ValidationError("base graph: 5G-NR graphs have multiplicity 1");
    }
}

bool BaseGraph::is_punctured(int col) const {
    return std::binary_search(punctured_.begin(), punctured_.end(), col);
}

const EdgeSpec* BaseGraph::edge(int row, int col) const {
    const auto it = entries_.find({row, col});
    return it == entries_.end() ? nullptr : &it->second;
}

std::string BaseGraph::canonical_payload() const {
    std::ostringstream out;
    out << "bg " << rows_ << ' ' << cols_ << ' ' << info_cols_ << ' ';
    if (punctured_.empty()) {
        out << '-';
    } else {
        for (std::size_t k = 0; k < punctured_.size(); ++k)
            out << (k ? "," : "") << punctured_[k];
    }
    out << '\n';
    for (const auto& [key, spec] : entries_) {
        out << key.first << ' ' << key.second << ' ';
        for (int m = 0; m < spec.multiplicity; ++m) out << (m ? "," : "") << spec.shifts[m];
        out << '\n';
    }
    return out.str();
}

std::uint64_t BaseGraph::checksum() const { return fnv1a64(canonical_payload()); }

namespace {

std::vector<int> parse_int_list(const std::string& text, int line_no) {
    std::vector<int> out;
    if (text == "-") return out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoi(tok));
        } catch (const std::logic_error&) {
            throw ParseError("base graph line " + std::to_string(line_no) + ": bad integer '" +
                             tok + "'");
        }
    }
    if (out.empty())
        throw ParseError("base graph line " + std::to_string(line_no) + ": empty list");
    return out;
}

}  // namespace

BaseGraph BaseGraph::load(const std::string& path, int lifting_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open base graph file: " + path);

    int rows = -1, cols = -1, info_cols = -1;
    std::vector<int> punctured;
    std::map<std::pair<int, int>, EdgeSpec> entries;
    bool have_checksum = false;
    std::uint64_t want_checksum = 0;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("# checksum fnv1a64 ", 0) == 0) {
            have_checksum = true;
            want_checksum = std::stoull(line.substr(19), nullptr, 16);
            continue;
        }
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;  // blank / comment line
        if (first == "bg") {
            std::string punct;
            if (!(ss >> rows >> cols >> info_cols >> punct))
                throw ParseError("base graph line " + std::to_string(line_no) +
                                 ": malformed header");
            punctured = punct == "-" ? std::vector<int>{} : parse_int_list(punct, line_no);
            continue;
        }
        if (rows < 0)
            throw ParseError("base graph line " + std::to_string(line_no) +
                             ": edge before 'bg' header");
        int j, i;
        std::string shifts_text;
        try {
            j = std::stoi(first);
        } catch (const std::logic_error&) {
            throw ParseError("base graph line " + std::to_string(line_no) + ": bad row index");
        }
        if (!(ss >> i >> shifts_text))
            throw ParseError("base graph line " + std::to_string(line_no) + ": malformed edge");
        EdgeSpec spec;
        spec.shifts = parse_int_list(shifts_text, line_no);
        spec.multiplicity = static_cast<int>(spec.shifts.size());
        if (!entries.emplace(std::make_pair(j, i), std::move(spec)).second)
            throw ParseError("base graph line " + std::to_string(line_no) + ": duplicate entry (" +
                             std::to_string(j) + "," + std::to_string(i) + ")");
    }
    if (rows < 0) throw ParseError("base graph file has no 'bg' header: " + path);

    BaseGraph bg(rows, cols, info_cols, lifting_size, std::move(punctured), std::move(entries));
    if (have_checksum && bg.checksum() != want_checksum) {
        std::ostringstream msg;
        msg << "base graph checksum mismatch in " << path << ": expected " << std::hex
            << want_checksum << ", payload gives " << bg.checksum();
        throw ValidationError(msg.str());
    }
    return bg;
}

void BaseGraph::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write base graph file: " + path);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(checksum()));
    out << "# checksum fnv1a64 " << buf << '\n' << canonical_payload();
}

RateSelection select_rate(const BaseGraph& bg, int parity_cols) {
    if (parity_cols < 0 || bg.info_cols() + parity_cols > bg.cols())
        throw ValidationError("select_rate: parity_cols out of range [0, " +
                              std::to_string(bg.cols() - bg.info_cols()) + "]");
    RateSelection sel;
    sel.active_cols = bg.info_cols() + parity_cols;
    sel.active_rows = parity_cols;
    int punct_active = 0;
    for (const int p : bg.punctured_cols())
        if (p < sel.active_cols) ++punct_active;
    const int transmitted = sel.active_cols - punct_active;
    if (transmitted <= 0) throw ValidationError("select_rate: no transmitted columns");
    sel.rate = Rational(bg.info_cols(), transmitted);
    return sel;
}

int transmitted_cols(const BaseGraph& bg, const RateSelection& sel) {
    int punct_active = 0;
    for (const int p : bg.punctured_cols())
        if (p < sel.active_cols) ++punct_active;
    return sel.active_cols - punct_active;
}

int parity_cols_for_rate(const BaseGraph& bg, const Rational& target) {
    for (int p = 0; p <= bg.rows(); ++p) {
        try {
            if (select_rate(bg, p).rate <= target) return p;
        } catch (const ValidationError&) {
            continue;  // selections with no transmitted columns
        }
    }
    throw ValidationError("no parity_cols reaches rate <= " + target.str());
}

std::vector<std::pair<int, int>> identical_neighborhood_pairs(const BaseGraph& bg,
                                                              const RateSelection& sel) {
    // active-row neighborhoods, edge presence only
    std::vector<std::vector<int>> nbhd(sel.active_cols);
    for (int i = 0; i < sel.active_cols; ++i)
        for (const int j : bg.col_rows(i))
            if (j < sel.active_rows) nbhd[i].push_back(j);

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < sel.active_cols; ++a) {
        if (nbhd[a].empty()) continue;
        for (int b = a + 1; b < sel.active_cols; ++b)
            if (nbhd[a] == nbhd[b]) pairs.emplace_back(a, b);
    }
    return pairs;
}

int singleton_bound(int num_blocks, const Rational& rate) {
    if (num_blocks < 1) throw ValidationError("singleton_bound: M must be >= 1");
    if (rate.num <= 0 || Rational(1, 1) < rate)
        throw ValidationError("singleton_bound: rate must be in (0, 1]");
    // 1 + floor(M * (q - p) / q), exact integer arithmetic
    const std::int64_t p = rate.num, q = rate.den;
    return static_cast<int>(1 + (num_blocks * (q - p)) / q);
}

}  // namespace divekit
