#include "gar/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "gar/errors.hpp"

namespace gar {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_numeric(const std::string& cell, std::size_t row, const std::string& column) {
    std::string t = trim(cell);
    if (t.empty()) {
        throw DataError("missing value in column '" + column + "' at data row " +
                        std::to_string(row));
    }
    const char* begin = t.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end != begin + t.size()) {
        throw DataError("non-numeric cell '" + t + "' in column '" + column +
                        "' at data row " + std::to_string(row));
    }
    return value;
}

// Labels are opaque but must be strictly increasing: pure numbers compare
// numerically, anything else lexicographically ("1893Q1" style labels sort
// correctly that way).
bool label_less_equal(const std::string& a, const std::string& b) {
    char* enda = nullptr;
    char* endb = nullptr;
    double na = std::strtod(a.c_str(), &enda);
    double nb = std::strtod(b.c_str(), &endb);
    bool a_num = enda == a.c_str() + a.size() && !a.empty();
    bool b_num = endb == b.c_str() + b.size() && !b.empty();
    if (a_num && b_num) return na <= nb;
    return a <= b;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

TimeSeriesDataset parse_dataset_csv(const std::string& text, const CsvSchema& schema) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV input");
    std::vector<std::string> header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    if (header.size() < 2) {
        throw DataError("header must name a timestamp column, a response column and "
                        "at least one covariate column");
    }

    auto column_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DataError("column '" + name + "' not found in header");
        return static_cast<std::size_t>(it - header.begin());
    };

    std::size_t ts_col = schema.timestamp.empty() ? 0 : column_index(schema.timestamp);
    std::size_t y_col = schema.response.empty() ? 1 : column_index(schema.response);
    std::vector<std::size_t> x_cols;
    if (schema.covariates.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j != ts_col && j != y_col) x_cols.push_back(j);
        }
    } else {
        for (const auto& name : schema.covariates) x_cols.push_back(column_index(name));
    }
    if (x_cols.empty()) throw DataError("no covariate columns in schema");

    TimeSeriesDataset out;
    out.timestamp_name = header[ts_col];
    out.response_name = header[y_col];
    for (std::size_t j : x_cols) out.covariate_names.push_back(header[j]);

    std::vector<double> ys;
    std::vector<double> xs;  // row major
    std::unordered_set<std::string> seen;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw DataError("data row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        std::string ts = trim(cells[ts_col]);
        if (ts.empty()) {
            throw DataError("missing timestamp at data row " + std::to_string(row));
        }
        if (!seen.insert(ts).second) {
            throw DataError("duplicate timestamp '" + ts + "' at data row " +
                            std::to_string(row));
        }
        if (!out.timestamps.empty() && label_less_equal(ts, out.timestamps.back())) {
            throw DataError("unsorted timestamp '" + ts + "' at data row " +
                            std::to_string(row));
        }
        out.timestamps.push_back(ts);
        ys.push_back(parse_numeric(cells[y_col], row, header[y_col]));
        for (std::size_t j : x_cols) {
            xs.push_back(parse_numeric(cells[j], row, header[j]));
        }
    }
    if (row == 0) throw DataError("CSV has a header but no data rows");

    auto n = static_cast<Eigen::Index>(ys.size());
    auto d = static_cast<Eigen::Index>(x_cols.size());
    out.y = Eigen::Map<Eigen::VectorXd>(ys.data(), n);
    out.x = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        xs.data(), n, d);
    return out;
}

TimeSeriesDataset load_dataset(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_csv(buf.str(), schema);
}

std::string dataset_to_csv(const TimeSeriesDataset& dataset) {
    std::ostringstream out;
    out << dataset.timestamp_name << ',' << dataset.response_name;
    for (const auto& name : dataset.covariate_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        out << dataset.timestamps[static_cast<std::size_t>(i)] << ','
            << format_double(dataset.y[i]);
        for (Eigen::Index j = 0; j < dataset.covariate_dim(); ++j) {
            out << ',' << format_double(dataset.x(i, j));
        }
        out << '\n';
    }
    return out.str();
}

void write_dataset(const TimeSeriesDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << dataset_to_csv(dataset);
}

PredictorResponsePairs align_horizon_prefix(const TimeSeriesDataset& dataset, int horizon,
                                            Eigen::Index take) {
    if (take > dataset.size()) {
        throw UsageError("align_horizon: prefix exceeds dataset length");
    }
    if (horizon <= 0 || static_cast<Eigen::Index>(horizon) >= take) {
        throw DataError("horizon must satisfy 1 <= h < T (h=" + std::to_string(horizon) +
                        ", T=" + std::to_string(take) + ")");
    }
    Eigen::Index n = take - horizon;
    PredictorResponsePairs pairs;
    pairs.horizon = horizon;
    pairs.x.resize(n, dataset.covariate_dim() + 1);
    pairs.x.col(0).setOnes();
    pairs.x.rightCols(dataset.covariate_dim()) = dataset.x.topRows(n);
    pairs.y = dataset.y.segment(horizon, n);
    return pairs;
}

PredictorResponsePairs align_horizon(const TimeSeriesDataset& dataset, int horizon) {
    return align_horizon_prefix(dataset, horizon, dataset.size());
}

}  // namespace gar
