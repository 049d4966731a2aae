#include "blockperm/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "blockperm/rng.h"

namespace blockperm {

size_t next_power_of_two(size_t n) {
    size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

AdjacencyMatrix::AdjacencyMatrix(size_t n_nodes)
    : n_nodes_(n_nodes), size_(next_power_of_two(n_nodes)), n_qubits_(log2_exact(size_)), entries_(size_ * size_, 0.0) {
}

void AdjacencyMatrix::set_symmetric(size_t r, size_t c, double value) {
    if (r >= size_ || c >= size_) {
        throw std::out_of_range(fmt::format("entry ({}, {}) outside {}x{} matrix", r, c, size_, size_));
    }
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(fmt::format("entry ({}, {}) must be finite and nonnegative, got {}", r, c, value));
    }
    entries_[r * size_ + c] = value;
    entries_[c * size_ + r] = value;
}

double AdjacencyMatrix::total_sum() const {
    double total = 0.0;
    for (double v : entries_) {
        total += v;
    }
    return total;
}

std::vector<double> AdjacencyMatrix::row_sums() const {
    std::vector<double> sums(size_, 0.0);
    for (size_t r = 0; r < size_; r++) {
        for (double v : row(r)) {
            sums[r] += v;
        }
    }
    return sums;
}

bool AdjacencyMatrix::is_symmetric() const {
    for (size_t r = 0; r < size_; r++) {
        for (size_t c = r + 1; c < size_; c++) {
            if ((*this)(r, c) != (*this)(c, r)) {
                return false;
            }
        }
    }
    return true;
}

bool AdjacencyMatrix::is_binary() const {
    return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

void AdjacencyMatrix::swap_indices(size_t a, size_t b) {
    if (a >= size_ || b >= size_) {
        throw std::out_of_range(fmt::format("swap ({}, {}) out of range for N={}", a, b, size_));
    }
    if (a == b) {
        return;
    }
    for (size_t c = 0; c < size_; c++) {
        std::swap(entries_[a * size_ + c], entries_[b * size_ + c]);
    }
    for (size_t r = 0; r < size_; r++) {
        std::swap(entries_[r * size_ + a], entries_[r * size_ + b]);
    }
}

AdjacencyMatrix generate_barbell(size_t clique_size, size_t path_length) {
    if (clique_size < 3) {
        throw std::invalid_argument(fmt::format("barbell clique size must be >= 3, got {}", clique_size));
    }
    size_t n = 2 * clique_size + path_length;
    AdjacencyMatrix m(n);
    size_t second = clique_size + path_length;
    for (size_t i = 0; i < clique_size; i++) {
        for (size_t j = i + 1; j < clique_size; j++) {
            m.set_symmetric(i, j, 1.0);
            m.set_symmetric(second + i, second + j, 1.0);
        }
    }
    // Chain: last node of clique 1, path nodes, first node of clique 2.
    for (size_t v = clique_size - 1; v < second; v++) {
        m.set_symmetric(v, v + 1, 1.0);
    }
    return m;
}

AdjacencyMatrix generate_planted_blocks(const std::vector<size_t> &block_sizes, double p_in, double p_out,
                                        uint64_t seed) {
    if (block_sizes.empty()) {
        throw std::invalid_argument("planted blocks: empty block list");
    }
    if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) {
        throw std::invalid_argument(fmt::format("planted blocks: need 0 <= p_out <= p_in <= 1, got p_in={} p_out={}",
                                                p_in, p_out));
    }
    std::vector<size_t> block_of;
    for (size_t b = 0; b < block_sizes.size(); b++) {
        block_of.insert(block_of.end(), block_sizes[b], b);
    }
    AdjacencyMatrix m(block_of.size());
    Rng rng(seed);
    for (size_t r = 0; r < block_of.size(); r++) {
        for (size_t c = r + 1; c < block_of.size(); c++) {
            double p = block_of[r] == block_of[c] ? p_in : p_out;
            if (rng.unit() < p) {
                m.set_symmetric(r, c, 1.0);
            }
        }
    }
    return m;
}

AdjacencyMatrix conjugate(const AdjacencyMatrix &matrix, const Permutation &p) {
    size_t n = matrix.size();
    if (p.size() != n) {
        throw std::invalid_argument(fmt::format("permutation size {} does not match matrix size {}", p.size(), n));
    }
    // Padding stays at the tail only if p keeps the real nodes in place as a set.
    bool keeps_padding = true;
    for (size_t i = 0; i < matrix.n_nodes(); i++) {
        keeps_padding = keeps_padding && p(i) < matrix.n_nodes();
    }
    AdjacencyMatrix out(keeps_padding ? matrix.n_nodes() : n);
    for (size_t r = 0; r < n; r++) {
        for (size_t c = 0; c < n; c++) {
            out.at(p(r), p(c)) = matrix(r, c);
        }
    }
    return out;
}

Permutation random_permutation(size_t n, uint64_t seed) {
    Rng rng(seed);
    std::vector<size_t> map(n);
    for (size_t i = 0; i < n; i++) {
        map[i] = i;
    }
    for (size_t i = n; i > 1; i--) {
        size_t j = static_cast<size_t>(rng.below(i));
        std::swap(map[i - 1], map[j]);
    }
    return Permutation(std::move(map));
}

std::pair<AdjacencyMatrix, Permutation> shuffle(const AdjacencyMatrix &matrix, uint64_t seed) {
    Permutation p = random_permutation(matrix.size(), seed);
    return {conjugate(matrix, p), p};
}

namespace {

bool parse_size(std::string_view token, size_t &out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

bool parse_double(const std::string &token, double &out) {
    if (token.empty()) {
        return false;
    }
    char *end = nullptr;
    out = std::strtod(token.c_str(), &end);
    return end == token.c_str() + token.size();
}

std::string strip(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

AdjacencyMatrix parse_edge_list(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    std::optional<AdjacencyMatrix> m;
    std::map<std::pair<size_t, size_t>, double> seen;
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string t; fields >> t;) {
            tokens.push_back(t);
        }
        if (tokens.empty()) {
            continue;
        }
        if (!m) {
            size_t count;
            if (tokens.size() != 2 || tokens[0] != "nodes" || !parse_size(tokens[1], count)) {
                throw FormatError("expected header 'nodes <count>'", line_no);
            }
            m.emplace(count);
            continue;
        }
        size_t u, v;
        double w = 1.0;
        if (tokens.size() < 2 || tokens.size() > 3 || !parse_size(tokens[0], u) || !parse_size(tokens[1], v) ||
            (tokens.size() == 3 && !parse_double(tokens[2], w))) {
            throw FormatError(fmt::format("malformed edge line '{}'", strip(line)), line_no);
        }
        if (u >= m->n_nodes() || v >= m->n_nodes()) {
            throw FormatError(fmt::format("node index out of range: {} {} with {} declared nodes", u, v, m->n_nodes()),
                              line_no);
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw FormatError(fmt::format("edge weight must be finite and nonnegative, got {}", tokens[2]), line_no);
        }
        auto key = std::minmax(u, v);
        if (auto it = seen.find(key); it != seen.end() && it->second != w) {
            throw FormatError(fmt::format("edge {} {} listed again with conflicting weight {} (was {})", u, v, w,
                                          it->second),
                              line_no);
        }
        seen[key] = w;
        m->set_symmetric(u, v, w);
    }
    if (!m) {
        throw FormatError("missing 'nodes <count>' header", 0);
    }
    return *m;
}

std::string format_edge_list(const AdjacencyMatrix &matrix) {
    std::string out = fmt::format("nodes {}\n", matrix.n_nodes());
    bool binary = matrix.is_binary();
    for (size_t r = 0; r < matrix.size(); r++) {
        for (size_t c = r; c < matrix.size(); c++) {
            double w = matrix(r, c);
            if (w == 0.0) {
                continue;
            }
            if (binary) {
                out += fmt::format("{} {}\n", r, c);
            } else {
                out += fmt::format("{} {} {}\n", r, c, format_exact(w));
            }
        }
    }
    return out;
}

AdjacencyMatrix parse_matrix_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        line_no++;
        std::string trimmed = strip(line);
        if (trimmed.empty()) {
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(trimmed);
        for (std::string cell; std::getline(cells, cell, ',');) {
            double v;
            if (!parse_double(strip(cell), v)) {
                throw FormatError(fmt::format("bad number '{}'", strip(cell)), line_no);
            }
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw FormatError(fmt::format("entries must be finite and nonnegative, got {}", strip(cell)), line_no);
            }
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw FormatError(fmt::format("expected {} columns, got {}", rows.front().size(), row.size()), line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw FormatError("empty matrix file", 0);
    }
    if (rows.front().size() != rows.size()) {
        throw FormatError(fmt::format("matrix is not square: {} rows, {} columns", rows.size(), rows.front().size()),
                          0);
    }
    AdjacencyMatrix m(rows.size());
    for (size_t r = 0; r < rows.size(); r++) {
        for (size_t c = 0; c < rows.size(); c++) {
            if (rows[r][c] != rows[c][r]) {
                throw FormatError(fmt::format("matrix is not symmetric at ({}, {})", r, c), r + 1);
            }
            m.at(r, c) = rows[r][c];
        }
    }
    return m;
}

std::string format_matrix_csv(const AdjacencyMatrix &matrix) {
    std::string out;
    for (size_t r = 0; r < matrix.size(); r++) {
        for (size_t c = 0; c < matrix.size(); c++) {
            if (c) {
                out += ',';
            }
            out += format_exact(matrix(r, c));
        }
        out += '\n';
    }
    return out;
}

std::string format_exact(double value) {
    return fmt::format("{}", value);
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open '{}' for reading", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::filesystem::path &path, const std::string &contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot open '{}' for writing", tmp.string()));
        }
        out << contents;
        if (!out.flush()) {
            throw std::runtime_error(fmt::format("write to '{}' failed", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

AdjacencyMatrix load_edge_list(const std::filesystem::path &path) {
    return parse_edge_list(read_file(path));
}

void save_edge_list(const AdjacencyMatrix &matrix, const std::filesystem::path &path) {
    write_file_atomic(path, format_edge_list(matrix));
}

AdjacencyMatrix load_matrix(const std::filesystem::path &path) {
    return parse_matrix_csv(read_file(path));
}

void save_matrix(const AdjacencyMatrix &matrix, const std::filesystem::path &path) {
    write_file_atomic(path, format_matrix_csv(matrix));
}

AdjacencyMatrix load_any(const std::filesystem::path &path) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string first;
    in >> first;
    return first == "nodes" ? parse_edge_list(text) : parse_matrix_csv(text);
}

}  // namespace blockperm
