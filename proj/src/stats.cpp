#include "ringqed/stats.hpp"

#include "ringqed/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ringqed {

void StreamingStats::add(double x) {
    if (count_ == 0) {
        min_ = max_ = x;
    } else {
        min_ = std::min(min_, x);
        max_ = std::max(max_, x);
    }
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void StreamingStats::merge(const StreamingStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double n = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / n;
    m2_ += other.m2_ + delta * delta * na * nb / n;
    count_ += other.count_;
    min_ = std::min(min_, other.min_);
    max_ = std::max(max_, other.max_);
}

double StreamingStats::variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double StreamingStats::standard_error() const {
    return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
}

Histogram::Histogram(double lo, double hi, std::size_t bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
    if (!(hi > lo) || bins == 0) throw InvalidArgument("histogram: need hi > lo and bins > 0");
}

void Histogram::add(double x) {
    const double frac = (x - lo_) / (hi_ - lo_);
    const auto last = static_cast<long>(counts_.size()) - 1;
    long k = std::isfinite(frac) ? static_cast<long>(std::floor(frac * static_cast<double>(counts_.size())))
                                 : (x > lo_ ? last : 0);
    k = std::clamp(k, 0L, last);
    ++counts_[static_cast<std::size_t>(k)];
}

void Histogram::merge(const Histogram& other) {
    if (other.counts_.size() != counts_.size() || other.lo_ != lo_ || other.hi_ != hi_) {
        throw InvalidArgument("histogram: cannot merge different binnings");
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
}

std::size_t Histogram::mass() const {
    std::size_t total = 0;
    for (const auto c : counts_) total += c;
    return total;
}

double Histogram::bin_center(std::size_t k) const {
    return lo_ + (hi_ - lo_) * (static_cast<double>(k) + 0.5) / static_cast<double>(counts_.size());
}

void MetricStats::add(std::optional<double> value) {
    if (!value || !std::isfinite(*value)) {
        ++undefined;
        return;
    }
    stats.add(*value);
    if (histogram) histogram->add(*value);
}

void MetricStats::merge(const MetricStats& other) {
    stats.merge(other.stats);
    undefined += other.undefined;
    if (histogram && other.histogram) {
        histogram->merge(*other.histogram);
    } else if (!histogram && other.histogram) {
        histogram = other.histogram;
    }
}

std::size_t EnsembleStats::excluded_total() const {
    std::size_t total = 0;
    for (const auto& [reason, n] : excluded) total += n;
    return total;
}

void EnsembleStats::exclude(const std::string& reason) {
    ++excluded[reason];
}

void EnsembleStats::with_histogram(const std::string& metric, double lo, double hi,
                                   std::size_t bins) {
    metrics[metric].histogram.emplace(lo, hi, bins);
}

void EnsembleStats::merge(const EnsembleStats& other) {
    requested += other.requested;
    accepted += other.accepted;
    for (const auto& [reason, n] : other.excluded) excluded[reason] += n;
    for (const auto& [name, m] : other.metrics) metrics[name].merge(m);
}

nlohmann::json to_json(const EnsembleStats& stats) {
    nlohmann::json j;
    j["requested"] = stats.requested;
    j["accepted"] = stats.accepted;
    j["excluded"] = stats.excluded;
    for (const auto& [name, m] : stats.metrics) {
        nlohmann::json entry{{"count", m.stats.count()},
                             {"undefined", m.undefined},
                             {"mean", m.stats.mean()},
                             {"variance", m.stats.variance()},
                             {"standard_error", m.stats.standard_error()}};
        if (m.histogram) {
            entry["histogram"] = {{"lo", m.histogram->lo()},
                                  {"hi", m.histogram->hi()},
                                  {"counts", m.histogram->counts()}};
        }
        j["metrics"][name] = std::move(entry);
    }
    return j;
}

}  // namespace ringqed
