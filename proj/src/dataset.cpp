#include "sharpssl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sharpssl/errors.hpp"

namespace sharpssl {

std::size_t LabeledDataset::labeled_count() const {
    std::size_t c = 0;
    for (int label : y) c += (label != 0);
    return c;
}

double LabeledDataset::label_fraction() const {
    return n == 0 ? 0.0 : static_cast<double>(labeled_count()) / static_cast<double>(n);
}

LabeledDataset make_labeled_dataset(Matrix x, std::vector<int> y, int k,
                                    std::vector<std::string> column_names) {
    if (x.rows() == 0) {
        throw InvalidDimension("dataset needs at least one observation");
    }
    if (x.rows() != y.size()) {
        throw LengthMismatch("label vector length differs from row count");
    }
    if (k < 2) {
        throw InvalidDimension("class count K must be at least 2");
    }
    if (!x.all_finite()) {
        throw NotFinite("dataset features must be finite");
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] > k) {
            throw LabelOutOfRange("label " + std::to_string(y[i]) + " at row " + std::to_string(i + 1) +
                                  " outside {0,...," + std::to_string(k) + "}");
        }
    }
    if (!column_names.empty() && column_names.size() != x.cols()) {
        throw LengthMismatch("column name count differs from feature count");
    }
    LabeledDataset ds;
    ds.n = x.rows();
    ds.p = x.cols();
    ds.k = k;
    ds.x = std::move(x);
    ds.y = std::move(y);
    ds.column_names = std::move(column_names);
    return ds;
}

namespace {

// One CSV record, honoring quoted fields with "" escapes. Returns false at EOF.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t row_for_errors) {
    fields.clear();
    std::string field;
    bool in_quotes = false;
    bool any = false;
    int ch;
    while ((ch = in.get()) != EOF) {
        any = true;
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\n') {
            break;
        } else if (c == '\r') {
            // tolerate CRLF
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field", row_for_errors, fields.size() + 1);
    }
    if (!any) return false;
    fields.push_back(field);
    return true;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || begin == end) {
        throw ParseError("cannot parse numeric cell '" + cell + "'", row, col);
    }
    if (!std::isfinite(value)) {
        throw ParseError("non-finite value '" + cell + "'", row, col);
    }
    return value;
}

int parse_label(const std::string& cell, const std::string& unlabeled_token, std::size_t row, std::size_t col) {
    if (cell.empty() || cell == unlabeled_token) return 0;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError("cannot parse label cell '" + cell + "'", row, col);
    }
    if (value < 0) {
        throw LabelOutOfRange("negative label at row " + std::to_string(row));
    }
    return value;
}

}  // namespace

LabeledDataset load_csv(const std::string& path, const std::string& label_column,
                        const std::string& unlabeled_token, int k_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }

    std::vector<std::string> header;
    if (!read_record(in, header, 1)) {
        throw ParseError("missing header row", 1, 1);
    }

    std::size_t label_index = header.size();  // sentinel: no label column
    if (label_column != "none") {
        const auto it = std::find(header.begin(), header.end(), label_column);
        if (it == header.end()) {
            throw Error("label column '" + label_column + "' not found in header");
        }
        label_index = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_index) names.push_back(header[j]);
    }
    const std::size_t p = names.size();
    if (p == 0) {
        throw ParseError("no feature columns", 1, 1);
    }

    std::vector<double> values;
    std::vector<int> labels;
    std::vector<std::string> fields;
    std::size_t row = 1;
    while (read_record(in, fields, row + 1)) {
        ++row;
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() != header.size()) {
            throw InconsistentWidth(row, header.size(), fields.size());
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            if (j == label_index) {
                labels.push_back(parse_label(fields[j], unlabeled_token, row, j + 1));
            } else {
                values.push_back(parse_number(fields[j], row, j + 1));
            }
        }
        if (label_index == header.size()) labels.push_back(0);
    }
    if (labels.empty()) {
        throw ParseError("no data rows", row + 1, 1);
    }

    int k = k_override;
    if (k <= 0) {
        k = 2;
        for (int label : labels) k = std::max(k, label);
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] > k) {
            throw LabelOutOfRange("label " + std::to_string(labels[i]) + " at row " + std::to_string(i + 2) +
                                  " exceeds K=" + std::to_string(k));
        }
    }

    Matrix x(labels.size(), p, std::move(values));
    return make_labeled_dataset(std::move(x), std::move(labels), k, std::move(names));
}

void save_csv(const LabeledDataset& ds, const std::string& path, const std::string& label_column) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out.precision(17);
    out << label_column;
    for (std::size_t j = 0; j < ds.p; ++j) {
        out << ',' << (ds.column_names.empty() ? "x" + std::to_string(j + 1) : ds.column_names[j]);
    }
    out << '\n';
    for (std::size_t i = 0; i < ds.n; ++i) {
        out << ds.y[i];
        for (std::size_t j = 0; j < ds.p; ++j) out << ',' << ds.x(i, j);
        out << '\n';
    }
}

std::pair<LabeledDataset, Standardization> standardize(const LabeledDataset& ds) {
    if (ds.n < 2) {
        throw InvalidDimension("standardize needs at least two rows");
    }
    Standardization stats;
    stats.mean.resize(ds.p);
    stats.sd.resize(ds.p);
    Matrix z = ds.x;
    for (std::size_t j = 0; j < ds.p; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) sum += ds.x(i, j);
        const double mean = sum / static_cast<double>(ds.n);
        double ss = 0.0;
        for (std::size_t i = 0; i < ds.n; ++i) {
            const double dev = ds.x(i, j) - mean;
            ss += dev * dev;
        }
        const double variance = ss / static_cast<double>(ds.n - 1);
        // Constant columns may leave roundoff-sized variance; treat anything
        // below double precision of the column scale as zero.
        if (variance <= 1e-28 * (1.0 + mean * mean)) {
            throw ZeroVarianceColumn(j);
        }
        const double sd = std::sqrt(variance);
        stats.mean[j] = mean;
        stats.sd[j] = sd;
        for (std::size_t i = 0; i < ds.n; ++i) z(i, j) = (ds.x(i, j) - mean) / sd;
    }
    return {make_labeled_dataset(std::move(z), ds.y, ds.k, ds.column_names), std::move(stats)};
}

std::pair<LabeledDataset, std::vector<std::size_t>> drop_collinear(const LabeledDataset& ds, double tol) {
    if (tol < 0.0) {
        throw InvalidDimension("tolerance must be nonnegative");
    }
    std::vector<std::vector<double>> basis;  // orthonormal, spans kept columns
    std::vector<std::size_t> kept;
    std::vector<std::size_t> dropped;
    std::vector<double> col(ds.n);
    for (std::size_t j = 0; j < ds.p; ++j) {
        for (std::size_t i = 0; i < ds.n; ++i) col[i] = ds.x(i, j);
        const double original = norm2(col);
        std::vector<double> residual = col;
        for (const auto& q : basis) {
            const double proj = dot(q, residual);
            for (std::size_t i = 0; i < ds.n; ++i) residual[i] -= proj * q[i];
        }
        const double rnorm = norm2(residual);
        if (rnorm <= tol * original) {
            dropped.push_back(j);
            continue;
        }
        kept.push_back(j);
        for (double& v : residual) v /= rnorm;
        basis.push_back(std::move(residual));
    }
    if (kept.empty()) {
        throw InvalidDimension("all columns collinear at the given tolerance");
    }
    Matrix z(ds.n, kept.size());
    for (std::size_t i = 0; i < ds.n; ++i) {
        for (std::size_t c = 0; c < kept.size(); ++c) z(i, c) = ds.x(i, kept[c]);
    }
    std::vector<std::string> names;
    if (!ds.column_names.empty()) {
        for (std::size_t c : kept) names.push_back(ds.column_names[c]);
    }
    return {make_labeled_dataset(std::move(z), ds.y, ds.k, std::move(names)), std::move(dropped)};
}

}  // namespace sharpssl
