#ifndef ANC_LINALG_HPP
#define ANC_LINALG_HPP

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace anc {

using Vec = std::vector<double>;

// Dense row-major matrix, sized for the small channel matrices used here.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

inline double dot(const Vec& x, const Vec& y) {
    assert(x.size() == y.size());
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec matvec(const Mat& m, const Vec& x) {
    assert(static_cast<int>(x.size()) == m.cols);
    Vec y(static_cast<size_t>(m.rows), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (int c = 0; c < m.cols; ++c) s += m(r, c) * x[static_cast<size_t>(c)];
        y[static_cast<size_t>(r)] = s;
    }
    return y;
}

inline Vec scaled(const Vec& x, double s) {
    Vec y(x);
    for (double& v : y) v *= s;
    return y;
}

}  // namespace anc

#endif
