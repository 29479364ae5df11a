// stats.hpp — streaming ensemble statistics.
#pragma once

#include <json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ringqed {

// Welford accumulator with an exact pairwise merge.
class StreamingStats {
public:
    void add(double x);
    void merge(const StreamingStats& other);

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    // Unbiased sample variance (0 for fewer than two samples).
    double variance() const;
    double standard_error() const;
    double min() const { return min_; }
    double max() const { return max_; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = 0.0;
    double max_ = 0.0;
};

// Fixed-range histogram; samples outside the range land in the edge bins so
// the total mass always equals the number of samples.
class Histogram {
public:
    Histogram(double lo, double hi, std::size_t bins);

    void add(double x);
    void merge(const Histogram& other);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t bins() const { return counts_.size(); }
    const std::vector<std::size_t>& counts() const { return counts_; }
    std::size_t mass() const;
    double bin_center(std::size_t k) const;

private:
    double lo_;
    double hi_;
    std::vector<std::size_t> counts_;
};

struct MetricStats {
    StreamingStats stats;
    std::optional<Histogram> histogram;
    std::size_t undefined = 0;  // trials where the metric had no value

    void add(std::optional<double> value);
    void merge(const MetricStats& other);
};

struct EnsembleStats {
    std::size_t requested = 0;
    std::size_t accepted = 0;
    std::map<std::string, std::size_t> excluded;  // reason -> count
    std::map<std::string, MetricStats> metrics;

    std::size_t excluded_total() const;
    void exclude(const std::string& reason);
    // Adds histogram binning for a metric; must be called before samples.
    void with_histogram(const std::string& metric, double lo, double hi, std::size_t bins);
    const MetricStats& at(const std::string& metric) const { return metrics.at(metric); }
    double mean(const std::string& metric) const { return metrics.at(metric).stats.mean(); }
    void merge(const EnsembleStats& other);
};

nlohmann::json to_json(const EnsembleStats& stats);

}  // namespace ringqed
