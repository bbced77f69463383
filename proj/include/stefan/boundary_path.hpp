#pragma once

#include <vector>

namespace stefan {

/// Nondecreasing cadlag step function on a time grid. The value at any
/// time before the first knot is 0, which encodes the left extension to
/// [-1, 0) used by the M1 machinery (value(0-) = 0 by construction).
class BoundaryPath {
public:
    BoundaryPath() = default;
    BoundaryPath(std::vector<double> times, std::vector<double> values);

    /// Flat zero path on the given grid.
    static BoundaryPath zero(const std::vector<double>& times);
    static BoundaryPath constant(const std::vector<double>& times, double c);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    /// Cadlag evaluation: value at the last knot <= t, 0 before the grid.
    double value_at(double t) const;

    /// Left limit: value at the last knot strictly before t.
    double value_before(double t) const;

    double front_time() const { return times_.front(); }
    double horizon() const { return times_.back(); }

    bool is_nondecreasing(double tol = 0.0) const;
    double max_increment() const;

    /// sup_t |a(t) - b(t)| over the union of both knot sets.
    static double sup_distance(const BoundaryPath& a, const BoundaryPath& b);

    /// min_t (a(t) - b(t)) over the union of both knot sets.
    static double min_difference(const BoundaryPath& a, const BoundaryPath& b);

    /// Knot times where the increment exceeds the threshold.
    std::vector<double> jump_times(double threshold) const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

} // namespace stefan
