#include "bwu/table_function.hpp"

#include <cmath>
#include <stdexcept>

namespace bwu {

TableFunction::TableFunction(std::vector<double> nodes, std::vector<double> values,
                             std::string label)
    : nodes_(std::move(nodes)), values_(std::move(values)), label_(std::move(label)) {
    if (nodes_.empty() || nodes_.size() != values_.size())
        throw std::invalid_argument("TableFunction: node/value count mismatch");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] <= 0.0)
            throw std::invalid_argument("TableFunction: nodes must be positive");
        if (values_[i] < 0.0)
            throw std::invalid_argument("TableFunction: values must be nonnegative");
        if (i && nodes_[i] <= nodes_[i - 1])
            throw std::invalid_argument("TableFunction: nodes must increase");
    }
}

double TableFunction::eval(double r) const {
    if (r <= 0.0) throw std::invalid_argument("TableFunction::eval: r must be positive");
    if (r < nodes_.front() * (1.0 - 1e-12) || r > nodes_.back() * (1.0 + 1e-12))
        return 0.0;
    if (nodes_.size() == 1) return values_.front();
    std::size_t j = 1;
    while (j + 1 < nodes_.size() && r > nodes_[j]) ++j;
    const double l0 = std::log(nodes_[j - 1]), l1 = std::log(nodes_[j]);
    const double t = (std::log(r) - l0) / (l1 - l0);
    return values_[j - 1] + (values_[j] - values_[j - 1]) * std::min(1.0, std::max(0.0, t));
}

TableFunction TableFunction::indicator(const std::vector<double>& nodes, double a,
                                       double b) {
    std::vector<double> vals(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] >= a && nodes[i] <= b) vals[i] = 1.0;
    return TableFunction(nodes, vals, "indicator");
}

} // namespace bwu
