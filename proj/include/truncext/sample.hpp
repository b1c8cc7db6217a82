#ifndef TRUNCEXT_SAMPLE_HPP
#define TRUNCEXT_SAMPLE_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace truncext {

enum class Margin { X, Y };

/// Immutable randomly right-truncated sample: observed pairs (x, y) with
/// x <= y, plus cached per-margin order statistics.  All queries are
/// read-only and safe for concurrent use.
class TruncatedSample {
  public:
    /// Validates positivity, finiteness and x <= y for every pair; reports the
    /// offending index on failure.  The list must be nonempty.
    static TruncatedSample from_pairs(std::vector<std::pair<double, double>> raw);

    /// Builds a sample without revalidating (pairs already satisfy the
    /// observability constraint); used by the generators.  May be empty.
    static TruncatedSample from_validated(std::vector<std::pair<double, double>> raw);

    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    const std::vector<std::pair<double, double>>& pairs() const { return pairs_; }
    const std::vector<double>& x_sorted() const { return x_sorted_; }
    const std::vector<double>& y_sorted() const { return y_sorted_; }

    /// i-th smallest value of the requested margin, 1 <= i <= n.
    double order_stat(Margin margin, std::size_t i) const;

    /// C_n(x) = n^-1 #{i : x_i <= x <= y_i}, the truncation-overlap function.
    /// The indicator is closed on both ends.
    double c_n(double x) const;

    /// Empirical tail 1 - F_n(x) (or the Y analogue 1 - G_n(x)):
    /// n^-1 #{i : v_i > x}.
    double empirical_tail(Margin margin, double x) const;

  private:
    TruncatedSample() = default;

    std::vector<std::pair<double, double>> pairs_;
    std::vector<double> x_sorted_;
    std::vector<double> y_sorted_;
};

/// Reads the CSV ingestion format shared with the CLI: header line "x,y",
/// one decimal pair per line, '.' decimal separator.  Parse errors carry the
/// 1-based line number.
std::vector<std::pair<double, double>> read_pairs_csv(const std::string& path);

} // namespace truncext

#endif
