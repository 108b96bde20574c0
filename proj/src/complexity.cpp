#include "qreg/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "qreg/errors.hpp"
#include "qreg/rng.hpp"

namespace qreg {

const std::array<const char*, 12>& ComplexityProfile::feature_names() {
    static const std::array<const char*, 12> names = {"c1", "c2", "c3", "c4", "l1", "l2",
                                                      "l3", "s1", "s2", "s3", "s4", "t2"};
    return names;
}

double ComplexityProfile::value(int index) const {
    switch (index) {
    case 0: return c1;
    case 1: return c2;
    case 2: return c3;
    case 3: return c4;
    case 4: return l1;
    case 5: return l2;
    case 6: return l3;
    case 7: return s1;
    case 8: return s2;
    case 9: return s3;
    case 10: return s4;
    case 11: return t2;
    default: throw std::invalid_argument("ComplexityProfile::value: index out of range");
    }
}

std::vector<double> fractional_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return v[static_cast<std::size_t>(a)] < v[static_cast<std::size_t>(b)]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[static_cast<std::size_t>(order[j + 1])] == v[static_cast<std::size_t>(order[i])]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0; // 1-based average rank
        for (std::size_t k = i; k <= j; ++k) ranks[static_cast<std::size_t>(order[k])] = avg;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw UndefinedCorrelationError("spearman_rho: constant input");
    return sab / std::sqrt(saa * sbb);
}

} // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    if (a.size() < 3) throw std::invalid_argument("spearman_rho: need at least 3 samples");
    const std::vector<double> ra = fractional_ranks(a);
    const std::vector<double> rb = fractional_ranks(b);
    const double rho = pearson(ra, rb);
    return std::clamp(rho, -1.0, 1.0);
}

double LinearModel::predict(std::span<const double> x) const {
    double p = intercept;
    for (std::size_t j = 0; j < coef.size(); ++j) p += coef[j] * x[j];
    return p;
}

namespace {

// Jacobi eigendecomposition of a small symmetric matrix (row-major m x m).
// Returns eigenvalues; V columns hold the eigenvectors.
void jacobi_eigen(std::vector<double>& a, int m, std::vector<double>& eigvals,
                  std::vector<double>& v) {
    v.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i) * m + i] = 1.0;
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * m + j]; };
    auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * m + j]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-30) break;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                if (std::abs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < m; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < m; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    eigvals.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) eigvals[static_cast<std::size_t>(i)] = A(i, i);
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

// index of the nearest row to `point`, excluding `skip` (-1 for none);
// ties go to the lower row index
int nearest_row(const Matrix& X, std::span<const double> point, int skip) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < X.rows; ++i) {
        if (i == skip) continue;
        const double d = sq_dist(X.row(i), point);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

LinearModel ols_fit(const Matrix& X, std::span<const double> y) {
    const int n = X.rows;
    const int d = X.cols;
    if (static_cast<int>(y.size()) != n) throw std::invalid_argument("ols_fit: length mismatch");
    if (n < d + 1) throw UnderdeterminedError("ols_fit: need at least d + 1 samples");

    // normal equations over the design [1 | X]
    const int m = d + 1;
    std::vector<double> g(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    auto G = [&](int i, int j) -> double& { return g[static_cast<std::size_t>(i) * m + j]; };
    for (int r = 0; r < n; ++r) {
        std::array<double, 1> one{1.0};
        auto row = X.row(r);
        auto at = [&](int j) { return j == 0 ? one[0] : row[static_cast<std::size_t>(j - 1)]; };
        for (int i = 0; i < m; ++i) {
            b[static_cast<std::size_t>(i)] += at(i) * y[static_cast<std::size_t>(r)];
            for (int j = i; j < m; ++j) G(i, j) += at(i) * at(j);
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < i; ++j) G(i, j) = G(j, i);

    std::vector<double> eigvals, v;
    jacobi_eigen(g, m, eigvals, v);
    double max_eig = 0.0;
    for (double e : eigvals) max_eig = std::max(max_eig, std::abs(e));
    const double tol = max_eig * 1e-12;

    // beta = sum_k (v_k . b / lambda_k) v_k over the non-null spectrum
    std::vector<double> beta(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        const double lambda = eigvals[static_cast<std::size_t>(k)];
        if (std::abs(lambda) <= tol) continue;
        double proj = 0.0;
        for (int i = 0; i < m; ++i)
            proj += v[static_cast<std::size_t>(i) * m + k] * b[static_cast<std::size_t>(i)];
        proj /= lambda;
        for (int i = 0; i < m; ++i)
            beta[static_cast<std::size_t>(i)] += proj * v[static_cast<std::size_t>(i) * m + k];
    }

    LinearModel model;
    model.intercept = beta[0];
    model.coef.assign(beta.begin() + 1, beta.end());
    return model;
}

std::vector<std::pair<int, int>> minimum_spanning_tree(const Matrix& X) {
    const int n = X.rows;
    if (n < 2) throw std::invalid_argument("minimum_spanning_tree: need at least 2 points");
    std::vector<bool> in_tree(static_cast<std::size_t>(n), false);
    std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    in_tree[0] = true;
    for (int i = 1; i < n; ++i) {
        dist[static_cast<std::size_t>(i)] = sq_dist(X.row(0), X.row(i));
        parent[static_cast<std::size_t>(i)] = 0;
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n - 1));
    for (int step = 0; step < n - 1; ++step) {
        int pick = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            if (!in_tree[static_cast<std::size_t>(i)] && dist[static_cast<std::size_t>(i)] < best) {
                best = dist[static_cast<std::size_t>(i)];
                pick = i;
            }
        }
        in_tree[static_cast<std::size_t>(pick)] = true;
        const int p = parent[static_cast<std::size_t>(pick)];
        edges.emplace_back(std::min(p, pick), std::max(p, pick));
        for (int i = 0; i < n; ++i) {
            if (in_tree[static_cast<std::size_t>(i)]) continue;
            const double d = sq_dist(X.row(pick), X.row(i));
            if (d < dist[static_cast<std::size_t>(i)]) {
                dist[static_cast<std::size_t>(i)] = d;
                parent[static_cast<std::size_t>(i)] = pick;
            }
        }
    }
    return edges;
}

namespace {

// |rho| over a subset of rows of one feature column vs y; 0 when a side is
// constant (a constant side carries no monotone information)
double abs_rho_subset(const std::vector<double>& xj, const std::vector<double>& y,
                      const std::vector<int>& rows) {
    std::vector<double> a, b;
    a.reserve(rows.size());
    b.reserve(rows.size());
    for (int r : rows) {
        a.push_back(xj[static_cast<std::size_t>(r)]);
        b.push_back(y[static_cast<std::size_t>(r)]);
    }
    try {
        return std::abs(spearman_rho(a, b));
    } catch (const UndefinedCorrelationError&) {
        return 0.0;
    }
}

// C3 removal loop for one feature: drop the worst point of a rank-on-rank
// least-squares line until |rho| > 0.9 or fewer than 4 samples would remain.
int c3_removals(const std::vector<double>& xj, const std::vector<double>& y, int n) {
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    int removed = 0;
    for (;;) {
        if (abs_rho_subset(xj, y, rows) > 0.9) break;
        if (static_cast<int>(rows.size()) < 4) break;
        std::vector<double> xs, ys;
        xs.reserve(rows.size());
        ys.reserve(rows.size());
        for (int r : rows) {
            xs.push_back(xj[static_cast<std::size_t>(r)]);
            ys.push_back(y[static_cast<std::size_t>(r)]);
        }
        const std::vector<double> rx = fractional_ranks(xs);
        const std::vector<double> ry = fractional_ranks(ys);
        // slope/intercept of ry ~ rx
        const double m = static_cast<double>(rows.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            mx += rx[i];
            my += ry[i];
        }
        mx /= m;
        my /= m;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            sxy += (rx[i] - mx) * (ry[i] - my);
            sxx += (rx[i] - mx) * (rx[i] - mx);
        }
        const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
        const double inter = my - slope * mx;
        std::size_t worst = 0;
        double worst_abs = -1.0;
        for (std::size_t i = 0; i < rx.size(); ++i) {
            const double resid = std::abs(ry[i] - (inter + slope * rx[i]));
            if (resid > worst_abs) {
                worst_abs = resid;
                worst = i;
            }
        }
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(worst));
        ++removed;
    }
    return removed;
}

LinearModel simple_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    LinearModel model;
    model.coef = {sxx > 0.0 ? sxy / sxx : 0.0};
    model.intercept = my - model.coef[0] * mx;
    return model;
}

} // namespace

ComplexityProfile compute_profile(const RegressionDataset& data, std::uint64_t seed) {
    const int n = data.n();
    const int d = data.dim();
    if (n < 10) throw std::invalid_argument("compute_profile: need at least 10 samples");
    const std::vector<double>& y = data.y;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; }))
        throw DegenerateTargetError("compute_profile: constant target");

    ComplexityProfile prof;

    std::vector<std::vector<double>> cols(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        cols[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = data.x(i, j);
    }

    // --- feature-output association ---
    std::vector<double> abs_rho(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        try {
            abs_rho[static_cast<std::size_t>(j)] =
                std::abs(spearman_rho(cols[static_cast<std::size_t>(j)], y));
        } catch (const UndefinedCorrelationError&) {
            abs_rho[static_cast<std::size_t>(j)] = 0.0; // constant feature
        }
    }
    prof.c1 = *std::max_element(abs_rho.begin(), abs_rho.end());
    prof.c2 = std::accumulate(abs_rho.begin(), abs_rho.end(), 0.0) / static_cast<double>(d);

    {
        int min_removed = n;
        for (int j = 0; j < d; ++j)
            min_removed = std::min(min_removed, c3_removals(cols[static_cast<std::size_t>(j)], y, n));
        prof.c3 = static_cast<double>(min_removed) / static_cast<double>(n);
    }

    {
        // features by initial |rho| descending, each used once
        std::vector<int> feat_order(static_cast<std::size_t>(d));
        std::iota(feat_order.begin(), feat_order.end(), 0);
        std::stable_sort(feat_order.begin(), feat_order.end(), [&](int a, int b) {
            return abs_rho[static_cast<std::size_t>(a)] > abs_rho[static_cast<std::size_t>(b)];
        });
        std::vector<int> subset(static_cast<std::size_t>(n));
        std::iota(subset.begin(), subset.end(), 0);
        for (int j : feat_order) {
            if (subset.empty()) break;
            std::vector<double> xs, ys;
            xs.reserve(subset.size());
            ys.reserve(subset.size());
            for (int r : subset) {
                xs.push_back(cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)]);
                ys.push_back(y[static_cast<std::size_t>(r)]);
            }
            const LinearModel line = simple_fit(xs, ys);
            std::vector<int> keep;
            for (std::size_t i = 0; i < subset.size(); ++i) {
                const double resid = std::abs(ys[i] - (line.intercept + line.coef[0] * xs[i]));
                if (resid > 0.1) keep.push_back(subset[i]);
            }
            subset = std::move(keep);
        }
        prof.c4 = static_cast<double>(subset.size()) / static_cast<double>(n);
    }

    // --- linearity of a full multiple regression ---
    const LinearModel full = ols_fit(data.x, y);
    {
        double abs_sum = 0.0, sq_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double resid = y[static_cast<std::size_t>(i)] - full.predict(data.x.row(i));
            abs_sum += std::abs(resid);
            sq_sum += resid * resid;
        }
        prof.l1 = abs_sum / static_cast<double>(n);
        prof.l2 = sq_sum / static_cast<double>(n);
    }

    // --- smoothness ---
    {
        double s = 0.0;
        for (const auto& [a, b] : minimum_spanning_tree(data.x))
            s += std::abs(y[static_cast<std::size_t>(a)] - y[static_cast<std::size_t>(b)]);
        prof.s1 = s / static_cast<double>(n);
    }

    std::vector<int> by_target(static_cast<std::size_t>(n));
    std::iota(by_target.begin(), by_target.end(), 0);
    std::stable_sort(by_target.begin(), by_target.end(), [&](int a, int b) {
        return y[static_cast<std::size_t>(a)] < y[static_cast<std::size_t>(b)];
    });
    {
        double s = 0.0;
        for (int i = 1; i < n; ++i)
            s += std::sqrt(sq_dist(data.x.row(by_target[static_cast<std::size_t>(i)]),
                                   data.x.row(by_target[static_cast<std::size_t>(i - 1)])));
        prof.s2 = s / static_cast<double>(n);
    }

    {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const int nb = nearest_row(data.x, data.x.row(i), i);
            const double e = y[static_cast<std::size_t>(nb)] - y[static_cast<std::size_t>(i)];
            s += e * e;
        }
        prof.s3 = s / static_cast<double>(n);
    }

    // --- behavior on interpolated test points (shared by l3 and s4) ---
    {
        Rng rng(hash_combine(seed, 0x13a4u));
        double lin_sum = 0.0, nn_sum = 0.0;
        std::vector<double> xp(static_cast<std::size_t>(d));
        for (int i = 0; i + 1 < n; ++i) {
            const int a = by_target[static_cast<std::size_t>(i)];
            const int b = by_target[static_cast<std::size_t>(i + 1)];
            const double t = rng.uniform01();
            for (int j = 0; j < d; ++j)
                xp[static_cast<std::size_t>(j)] = data.x(a, j) + t * (data.x(b, j) - data.x(a, j));
            const double yp = y[static_cast<std::size_t>(a)] +
                              t * (y[static_cast<std::size_t>(b)] - y[static_cast<std::size_t>(a)]);
            const double lin_err = full.predict(xp) - yp;
            lin_sum += lin_err * lin_err;
            const int nb = nearest_row(data.x, xp, -1);
            const double nn_err = y[static_cast<std::size_t>(nb)] - yp;
            nn_sum += nn_err * nn_err;
        }
        const double ell = static_cast<double>(n - 1);
        prof.l3 = lin_sum / ell;
        prof.s4 = nn_sum / ell;
    }

    prof.t2 = static_cast<double>(n) / static_cast<double>(d);
    return prof;
}

} // namespace qreg
