#pragma once

#include <string>
#include <vector>

namespace bwu {

/// Nonnegative function of r > 0 given by values at increasing nodes,
/// linearly interpolated in log r and zero outside the node range.
class TableFunction {
public:
    TableFunction(std::vector<double> nodes, std::vector<double> values,
                  std::string label = "table");

    double eval(double r) const;
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    const std::string& label() const { return label_; }

    /// Indicator of [a, b] sampled on the given nodes.
    static TableFunction indicator(const std::vector<double>& nodes, double a, double b);

private:
    std::vector<double> nodes_, values_;
    std::string label_;
};

} // namespace bwu
