#include "fracmoc/field.hpp"

#include <charconv>

namespace fracmoc {

Eigen::VectorXd linspace(double lo, double hi, Eigen::Index n) {
    Eigen::VectorXd v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (Eigen::Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    v[n - 1] = hi;
    return v;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const Field& field, std::string_view value_name, std::string_view x_name,
               std::string_view t_name) {
    os << x_name << ',' << t_name << ',' << value_name << '\n';
    for (Eigen::Index j = 0; j < field.t.size(); ++j) {
        for (Eigen::Index i = 0; i < field.x.size(); ++i) {
            os << format_number(field.x[i]) << ',' << format_number(field.t[j]) << ',';
            const double v = field.values(i, j);
            if (!Field::is_missing(v)) os << format_number(v);
            os << '\n';
        }
    }
}

}  // namespace fracmoc
