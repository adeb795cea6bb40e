#include "sgfs/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "sgfs/rng.hpp"

namespace sgfs {

namespace {

// Draws k distinct items from `pool` by a partial Fisher-Yates shuffle, in
// draw order.
std::vector<Index> sample_without_replacement(std::vector<Index> pool, Index k, Rng& rng) {
    const auto n = pool.size();
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, const std::filesystem::path& path, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        std::ostringstream msg;
        msg << path.string() << ":" << line << ": cannot parse number '" << token << "'";
        throw std::runtime_error(msg.str());
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_double(std::ostream& out, double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.write(buf, ptr - buf);
}

}  // namespace

SparsityBudget projection_bench_radii(Index p, LogBase base) {
    const double logp = base == LogBase::natural ? std::log(static_cast<double>(p))
                                                 : std::log10(static_cast<double>(p));
    const double s2 = 5.0 * logp;
    return SparsityBudget::radii(std::sqrt(10.0) / 2.0 * s2, s2);
}

ProjectionInstance gen_projection_instance(const ProjBenchSpec& spec) {
    if (spec.p < 2 || spec.group_count < 1 || spec.p % spec.group_count != 0)
        throw std::invalid_argument("gen_projection_instance: p must be divisible by the group count");
    Rng rng(spec.seed);
    Vector v(spec.p);
    for (Index j = 0; j < spec.p; ++j) v[j] = rng.uniform(spec.value_low, spec.value_high);
    return {std::move(v), projection_bench_radii(spec.p, spec.log_base),
            GroupPartition::contiguous(spec.p, spec.group_count)};
}

Dataset gen_synthetic_dataset(const SyntheticSpec& spec) {
    if (spec.n < 2 || spec.n % 2 != 0) throw std::invalid_argument("gen_synthetic_dataset: n must be even");
    if (spec.group_count < 1 || spec.p % spec.group_count != 0)
        throw std::invalid_argument("gen_synthetic_dataset: p must be divisible by the group count");
    if (spec.active_groups < 0 || spec.active_groups > spec.group_count)
        throw std::invalid_argument("gen_synthetic_dataset: active_groups exceeds group count");
    const Index group_size = spec.p / spec.group_count;
    if (spec.min_group_nonzeros < 1 || spec.max_group_nonzeros < spec.min_group_nonzeros ||
        spec.max_group_nonzeros > group_size)
        throw std::invalid_argument("gen_synthetic_dataset: invalid per-group nonzero range");

    auto partition = GroupPartition::contiguous(spec.p, spec.group_count);
    Rng rng(spec.seed);

    // Draw order: A row by row, then the active groups, then per active group
    // its nonzero count, positions and values, then the noise.
    Matrix A(spec.n, spec.p);
    for (Index i = 0; i < spec.n; ++i)
        for (Index j = 0; j < spec.p; ++j) A(i, j) = rng.normal();

    std::vector<Index> group_ids(static_cast<std::size_t>(spec.group_count));
    std::iota(group_ids.begin(), group_ids.end(), Index{0});
    Vector x0 = Vector::Zero(spec.p);
    const Index span_width = spec.max_group_nonzeros - spec.min_group_nonzeros + 1;
    for (Index g : sample_without_replacement(group_ids, spec.active_groups, rng)) {
        const Index t = spec.min_group_nonzeros + static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(span_width)));
        for (Index j : sample_without_replacement(partition.group(g), t, rng)) x0[j] = rng.normal();
    }

    Vector y = A * x0;
    for (Index i = 0; i < spec.n; ++i) y[i] += rng.normal(0.0, spec.noise_sd);

    const Index half = spec.n / 2;
    return Dataset{ProblemInstance(A.topRows(half), y.head(half), partition),
                   ProblemInstance(A.bottomRows(half), y.tail(half), partition), std::move(x0)};
}

Matrix read_matrix_csv(const std::filesystem::path& path, bool header) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (header && line_no == 1) continue;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (auto tok : split(line, ',')) row.push_back(parse_double(tok, path, line_no));
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": ragged row (" << row.size() << " columns, expected "
                << rows.front().size() << ")";
            throw std::runtime_error(msg.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path.string() + ": empty matrix");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return m;
}

Vector read_vector_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        values.push_back(parse_double(line, path, line_no));
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

GroupPartition read_groups(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        for (auto tok : split(line, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            int id = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                std::ostringstream msg;
                msg << path.string() << ":" << line_no << ": cannot parse group id '" << tok << "'";
                throw std::runtime_error(msg.str());
            }
            labels.push_back(id);
        }
    }
    if (labels.empty()) throw std::runtime_error(path.string() + ": no group ids");
    try {
        return GroupPartition::from_labels(labels);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

ProblemInstance load_csv_dataset(const std::filesystem::path& matrix_path, const std::filesystem::path& response_path,
                                 const std::filesystem::path& groups_path, const CsvOptions& options) {
    Matrix A = read_matrix_csv(matrix_path, options.header);
    Vector y = read_vector_csv(response_path);
    GroupPartition groups = read_groups(groups_path);
    if (A.cols() != groups.p()) {
        std::ostringstream msg;
        msg << "feature-count mismatch: matrix has " << A.cols() << " columns, groups file lists " << groups.p()
            << " features";
        throw std::runtime_error(msg.str());
    }
    if (A.rows() != y.size()) {
        std::ostringstream msg;
        msg << "sample-count mismatch: matrix has " << A.rows() << " rows, response has " << y.size() << " values";
        throw std::runtime_error(msg.str());
    }
    return ProblemInstance(std::move(A), std::move(y), std::move(groups));
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    auto out = open_output(path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            write_double(out, m(i, j));
        }
        out << '\n';
    }
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
    auto out = open_output(path);
    for (Index i = 0; i < v.size(); ++i) {
        write_double(out, v[i]);
        out << '\n';
    }
}

void write_groups(const std::filesystem::path& path, const GroupPartition& partition) {
    auto out = open_output(path);
    for (int label : partition.labels()) out << label << '\n';
}

}  // namespace sgfs
