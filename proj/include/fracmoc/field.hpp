#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fracmoc {

// Scalar values on a rectangular (x, t) grid; values(i, j) sits at (x[i], t[j]).
// Missing entries hold NaN and are counted in `missing`.
struct Field {
    Eigen::VectorXd x;
    Eigen::VectorXd t;
    Eigen::MatrixXd values;
    std::size_t missing = 0;
    std::vector<std::string> errors;  // first few per-point failures, for diagnostics

    Field() = default;
    Field(Eigen::VectorXd xs, Eigen::VectorXd ts)
        : x(std::move(xs)),
          t(std::move(ts)),
          values(Eigen::MatrixXd::Constant(x.size(), t.size(), std::numeric_limits<double>::quiet_NaN())) {}

    static bool is_missing(double v) { return v != v; }

    void record_missing(std::string message) {
        ++missing;
        if (errors.size() < 16) errors.push_back(std::move(message));
    }
};

// n evenly spaced points from lo to hi inclusive (n = 1 gives {lo}).
Eigen::VectorXd linspace(double lo, double hi, Eigen::Index n);

// Shortest round-trip decimal text for v.
std::string format_number(double v);

// CSV with header `x,t,<value_name>`, rows ordered by t then x; missing
// values are written as an empty cell.
void write_csv(std::ostream& os, const Field& field, std::string_view value_name = "u",
               std::string_view x_name = "x", std::string_view t_name = "t");

}  // namespace fracmoc
