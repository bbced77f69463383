#include "stefan/boundary_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stefan {

BoundaryPath::BoundaryPath(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty() || times_.size() != values_.size())
        throw std::invalid_argument("path needs matching nonempty knots");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("path times must be strictly increasing");
}

BoundaryPath BoundaryPath::zero(const std::vector<double>& times) {
    return BoundaryPath(times, std::vector<double>(times.size(), 0.0));
}

BoundaryPath BoundaryPath::constant(const std::vector<double>& times, double c) {
    return BoundaryPath(times, std::vector<double>(times.size(), c));
}

double BoundaryPath::value_at(double t) const {
    if (t < times_.front()) return 0.0;
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

double BoundaryPath::value_before(double t) const {
    if (t <= times_.front()) return 0.0;
    const auto it = std::lower_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

bool BoundaryPath::is_nondecreasing(double tol) const {
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] < values_[i - 1] - tol) return false;
    return true;
}

double BoundaryPath::max_increment() const {
    double m = 0.0;
    for (std::size_t i = 1; i < values_.size(); ++i)
        m = std::max(m, values_[i] - values_[i - 1]);
    return m;
}

namespace {

template <typename F>
void for_union_knots(const BoundaryPath& a, const BoundaryPath& b, F&& f) {
    const auto& ta = a.times();
    const auto& tb = b.times();
    std::size_t i = 0, j = 0;
    while (i < ta.size() || j < tb.size()) {
        double t;
        if (j >= tb.size() || (i < ta.size() && ta[i] <= tb[j]))
            t = ta[i++];
        else
            t = tb[j++];
        while (i < ta.size() && ta[i] == t) ++i;
        while (j < tb.size() && tb[j] == t) ++j;
        f(t);
    }
}

} // namespace

double BoundaryPath::sup_distance(const BoundaryPath& a, const BoundaryPath& b) {
    double m = 0.0;
    for_union_knots(a, b, [&](double t) {
        m = std::max(m, std::abs(a.value_at(t) - b.value_at(t)));
    });
    return m;
}

double BoundaryPath::min_difference(const BoundaryPath& a, const BoundaryPath& b) {
    double m = std::numeric_limits<double>::infinity();
    for_union_knots(a, b, [&](double t) {
        m = std::min(m, a.value_at(t) - b.value_at(t));
    });
    return m;
}

std::vector<double> BoundaryPath::jump_times(double threshold) const {
    std::vector<double> out;
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i] - values_[i - 1] > threshold) out.push_back(times_[i]);
    if (!values_.empty() && times_.front() >= 0.0 && values_.front() > threshold)
        out.insert(out.begin(), times_.front());
    return out;
}

} // namespace stefan
