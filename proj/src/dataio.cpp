#include "sap/dataio.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

namespace sap {

namespace {

struct RawRow {
    double label;
    std::vector<std::pair<int, double>> entries;  // 1-based indices
};

RawRow parse_line(const std::string& line, int lineno) {
    std::istringstream ss(line);
    RawRow row;
    if (!(ss >> row.label))
        throw ParseError("libsvm line " + std::to_string(lineno) + ": missing label");
    std::string tok;
    int prev_index = 0;
    while (ss >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw ParseError("libsvm line " + std::to_string(lineno) +
                             ": malformed pair '" + tok + "'");
        int index = 0;
        double value = 0.0;
        try {
            index = std::stoi(tok.substr(0, colon));
            value = std::stod(tok.substr(colon + 1));
        } catch (const std::exception&) {
            throw ParseError("libsvm line " + std::to_string(lineno) +
                             ": malformed pair '" + tok + "'");
        }
        if (index <= prev_index)
            throw ParseError("libsvm line " + std::to_string(lineno) +
                             ": indices not ascending");
        if (!std::isfinite(value))
            throw ParseError("libsvm line " + std::to_string(lineno) +
                             ": non-finite value");
        prev_index = index;
        row.entries.emplace_back(index, value);
    }
    return row;
}

} // namespace

Dataset parse_libsvm_stream(std::istream& in, const std::string& source,
                            double positive_class, bool binarize) {
    std::vector<RawRow> rows;
    std::string line;
    int lineno = 0;
    int n = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(parse_line(line, lineno));
        for (const auto& [idx, val] : rows.back().entries) n = std::max(n, idx);
    }

    std::set<double> label_set;
    for (const auto& r : rows) label_set.insert(r.label);

    Dataset ds;
    ds.source = source;
    ds.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), n);
    ds.labels = Vector(static_cast<Eigen::Index>(rows.size()));
    const bool zero_one = label_set == std::set<double>{0.0, 1.0} ||
                          label_set == std::set<double>{0.0} ||
                          label_set == std::set<double>{1.0};
    const bool pm_one = label_set == std::set<double>{-1.0, 1.0} ||
                        label_set == std::set<double>{-1.0};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double y;
        if (binarize) {
            y = rows[i].label == positive_class ? 1.0 : -1.0;
        } else if (zero_one) {
            y = rows[i].label == 1.0 ? 1.0 : -1.0;
        } else if (pm_one || label_set == std::set<double>{1.0}) {
            y = rows[i].label;
        } else {
            throw ParseError("libsvm: labels are not binary; pass a positive class to binarize");
        }
        ds.labels(static_cast<Eigen::Index>(i)) = y;
        for (const auto& [idx, val] : rows[i].entries)
            ds.features(static_cast<Eigen::Index>(i), idx - 1) = val;
    }
    return ds;
}

Dataset parse_libsvm(const std::string& path, double positive_class, bool binarize) {
    std::ifstream in(path);
    if (!in) throw InputError("parse_libsvm: cannot open " + path);
    return parse_libsvm_stream(in, path, positive_class, binarize);
}

void serialize_libsvm(const Dataset& ds, std::ostream& out) {
    for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
        out << (ds.labels(i) > 0 ? "+1" : "-1");
        for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
            if (ds.features(i, j) != 0.0) {
                char buf[64];
                std::snprintf(buf, sizeof buf, " %ld:%.17g", static_cast<long>(j + 1),
                              ds.features(i, j));
                out << buf;
            }
        }
        out << '\n';
    }
}

Dataset preprocess(Dataset ds, bool center, bool normalize_rows, bool add_bias) {
    if (center) {
        Eigen::RowVectorXd mean = ds.features.colwise().mean();
        ds.features.rowwise() -= mean;
        ds.centered = true;
    }
    if (normalize_rows) {
        for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
            double norm = ds.features.row(i).norm();
            if (norm > 0.0) {
                ds.features.row(i) /= norm;
            } else {
                std::cerr << "preprocess: zero row " << i << " left unnormalized\n";
            }
        }
        ds.normalized = true;
    }
    if (add_bias) {
        Matrix with_bias(ds.features.rows(), ds.features.cols() + 1);
        with_bias.leftCols(ds.features.cols()) = ds.features;
        with_bias.col(ds.features.cols()).setOnes();
        ds.features = std::move(with_bias);
        ds.bias_added = true;
    }
    return ds;
}

SymMatrix gen_alpha_beta(double alpha, double beta, Eigen::Index n) {
    if (!(alpha > 0.0) || beta < -alpha / static_cast<double>(n))
        throw InvalidSpectrum("gen_alpha_beta: need alpha > 0 and beta >= -alpha/n");
    Matrix a = Matrix::Constant(n, n, beta);
    a.diagonal().array() += alpha;
    return SymMatrix::symmetrize(a);
}

SymMatrix gen_spectrum(const Vector& eigs, std::uint64_t seed) {
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (!(eigs(i) > 0.0)) throw InvalidSpectrum("gen_spectrum: eigenvalues must be positive");
    const Eigen::Index n = eigs.size();
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix u = qr.householderQ();
    return SymMatrix::symmetrize(u * eigs.asDiagonal() * u.transpose());
}

} // namespace sap
