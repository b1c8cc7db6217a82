#include "truncext/sample.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace truncext {

TruncatedSample TruncatedSample::from_pairs(std::vector<std::pair<double, double>> raw) {
    if (raw.empty()) {
        throw std::invalid_argument("TruncatedSample: empty pair list");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto [x, y] = raw[i];
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("TruncatedSample: non-finite entry at index " +
                                        std::to_string(i));
        }
        if (x <= 0.0 || y <= 0.0) {
            throw std::invalid_argument("TruncatedSample: non-positive entry at index " +
                                        std::to_string(i));
        }
        if (x > y) {
            throw std::invalid_argument("TruncatedSample: x > y at index " +
                                        std::to_string(i));
        }
    }
    return from_validated(std::move(raw));
}

TruncatedSample TruncatedSample::from_validated(
    std::vector<std::pair<double, double>> raw) {
    TruncatedSample s;
    s.pairs_ = std::move(raw);
    s.x_sorted_.reserve(s.pairs_.size());
    s.y_sorted_.reserve(s.pairs_.size());
    for (const auto& [x, y] : s.pairs_) {
        s.x_sorted_.push_back(x);
        s.y_sorted_.push_back(y);
    }
    std::stable_sort(s.x_sorted_.begin(), s.x_sorted_.end());
    std::stable_sort(s.y_sorted_.begin(), s.y_sorted_.end());
    return s;
}

double TruncatedSample::order_stat(Margin margin, std::size_t i) const {
    const auto& v = margin == Margin::X ? x_sorted_ : y_sorted_;
    if (i < 1 || i > v.size()) {
        throw std::out_of_range("order_stat: index " + std::to_string(i) +
                                " outside [1, " + std::to_string(v.size()) + "]");
    }
    return v[i - 1];
}

double TruncatedSample::c_n(double x) const {
    if (pairs_.empty()) {
        return 0.0;
    }
    // #{x_i <= x} - #{y_i < x}; every y_i < x has its x_i <= y_i < x as well,
    // so the difference counts exactly the pairs with x_i <= x <= y_i.
    const auto nx = std::upper_bound(x_sorted_.begin(), x_sorted_.end(), x) -
                    x_sorted_.begin();
    const auto ny = std::lower_bound(y_sorted_.begin(), y_sorted_.end(), x) -
                    y_sorted_.begin();
    return static_cast<double>(nx - ny) / static_cast<double>(pairs_.size());
}

double TruncatedSample::empirical_tail(Margin margin, double x) const {
    if (pairs_.empty()) {
        return 0.0;
    }
    const auto& v = margin == Margin::X ? x_sorted_ : y_sorted_;
    const auto above = v.end() - std::upper_bound(v.begin(), v.end(), x);
    return static_cast<double>(above) / static_cast<double>(v.size());
}

std::vector<std::pair<double, double>> read_pairs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    // Tolerate a UTF-8 BOM and trailing CR on the header.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "x,y") {
        throw std::runtime_error(path + ":1: expected header 'x,y', got '" + line + "'");
    }
    std::vector<std::pair<double, double>> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": missing comma");
        }
        try {
            std::size_t used1 = 0;
            std::size_t used2 = 0;
            const std::string xs = line.substr(0, comma);
            const std::string ys = line.substr(comma + 1);
            const double x = std::stod(xs, &used1);
            const double y = std::stod(ys, &used2);
            if (used1 != xs.size() || used2 != ys.size()) {
                throw std::invalid_argument("trailing characters");
            }
            out.emplace_back(x, y);
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed row '" + line + "'");
        }
    }
    if (out.empty()) {
        throw std::runtime_error(path + ": no data rows");
    }
    return out;
}

} // namespace truncext
