#include "arcsim/havok.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "arcsim/csv.hpp"
#include "arcsim/errors.hpp"

namespace arcsim {

namespace {

double median_of(const Eigen::VectorXd& s) {
    std::vector<double> v(s.data(), s.data() + s.size());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) {
        return v[n / 2];
    }
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Eigen::MatrixXd build_hankel(const std::vector<double>& x, int q) {
    if (q < 2) {
        throw decomposition_error("embedding depth q must be at least 2");
    }
    const int n = static_cast<int>(x.size());
    if (n < 2 * q) {
        throw decomposition_error("trace too short for delay embedding: need at least 2q samples");
    }
    const int p = n - q + 1;
    Eigen::MatrixXd h(q, p);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < p; ++j) {
            h(i, j) = x[i + j];
        }
    }
    return h;
}

Decomposition decompose(const Eigen::MatrixXd& hankel) {
    if (!hankel.allFinite()) {
        throw decomposition_error("Hankel matrix contains non-finite entries");
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(hankel, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Decomposition d;
    d.u = svd.matrixU();
    d.s = svd.singularValues();
    d.v = svd.matrixV();
    if (!d.u.allFinite() || !d.s.allFinite() || !d.v.allFinite()) {
        throw decomposition_error("singular value decomposition produced non-finite values");
    }
    for (Eigen::Index c = 0; c < d.u.cols(); ++c) {
        Eigen::Index peak = 0;
        d.u.col(c).cwiseAbs().maxCoeff(&peak);
        if (d.u(peak, c) < 0.0) {
            d.u.col(c) = -d.u.col(c);
            d.v.col(c) = -d.v.col(c);
        }
    }
    return d;
}

double spectral_threshold_weight(double beta) {
    return 0.56 * beta * beta * beta - 0.95 * beta * beta + 1.82 * beta + 1.43;
}

int select_rank(const Eigen::VectorXd& s, int q, int p) {
    if (s.size() == 0 || q <= 0 || p <= 0) {
        throw decomposition_error("rank selection needs a non-empty spectrum");
    }
    const double beta = static_cast<double>(q) / static_cast<double>(p);
    const double tau = spectral_threshold_weight(beta) * median_of(s);
    int count = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > tau) {
            ++count;
        }
    }
    const int len = static_cast<int>(s.size());
    return std::clamp(count, std::min(2, len), len);
}

Eigen::MatrixXd differentiate(const Eigen::MatrixXd& v, double dt) {
    if (v.rows() < 5) {
        throw decomposition_error("differentiation needs at least 5 rows for the 5-point stencil");
    }
    if (!(dt > 0.0)) {
        throw decomposition_error("differentiation step must be positive");
    }
    const Eigen::Index p = v.rows();
    Eigen::MatrixXd dv(p - 4, v.cols());
    for (Eigen::Index i = 2; i < p - 2; ++i) {
        dv.row(i - 2) =
            (-v.row(i + 2) + 8.0 * v.row(i + 1) - 8.0 * v.row(i - 1) + v.row(i - 2)) / (12.0 * dt);
    }
    return dv;
}

LinearModel identify(const Eigen::MatrixXd& v, double dt, int rank) {
    if (rank < 2 || rank > v.cols()) {
        throw decomposition_error("model rank out of range for the supplied coordinates");
    }
    const Eigen::MatrixXd states = v.leftCols(rank);
    LinearModel model;
    if (states.isZero(0.0)) {
        model.a = Eigen::MatrixXd::Zero(rank - 1, rank - 1);
        model.b = Eigen::VectorXd::Zero(rank - 1);
        model.residual = 0.0;
        return model;
    }

    const Eigen::MatrixXd dv = differentiate(states, dt);
    const Eigen::MatrixXd x = states.middleRows(2, states.rows() - 4);
    const Eigen::MatrixXd y = dv.leftCols(rank - 1);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(s_min > s_max * 1e-12)) {
        const double cond = (s_min > 0.0) ? s_max / s_min : std::numeric_limits<double>::infinity();
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "regression matrix is rank deficient (condition number %.3e)", cond);
        throw decomposition_error(msg);
    }
    const Eigen::MatrixXd theta = svd.solve(y);
    model.a = theta.topRows(rank - 1).transpose();
    model.b = theta.row(rank - 1).transpose();
    model.residual = (x * theta - y).norm();
    return model;
}

ForcingSignal forcing_signal(const std::vector<double>& x, double dt, double t0, int q) {
    const Eigen::MatrixXd h = build_hankel(x, q);
    const Decomposition d = decompose(h);
    const int p = static_cast<int>(h.cols());
    const int r = select_rank(d.s, q, p);

    ForcingSignal f;
    f.rank = r;
    f.spectrum.assign(d.s.data(), d.s.data() + d.s.size());
    f.time.resize(p);
    f.values.resize(p);
    for (int j = 0; j < p; ++j) {
        f.time[j] = t0 + j * dt;
        f.values[j] = d.v(j, r - 1);
    }
    return f;
}

ModelReport analyze(const std::vector<double>& x, double dt, int q) {
    const Eigen::MatrixXd h = build_hankel(x, q);
    const Decomposition d = decompose(h);
    const int p = static_cast<int>(h.cols());
    const int r = select_rank(d.s, q, p);

    ModelReport report;
    report.rank = r;
    report.spectrum.assign(d.s.data(), d.s.data() + d.s.size());
    report.model = identify(d.v, dt, r);
    return report;
}

std::string format_model_report(const ModelReport& report) {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof(line), "rank=%d\n", report.rank);
    out += line;
    out += "spectrum=";
    for (std::size_t i = 0; i < report.spectrum.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += format_value(report.spectrum[i]);
    }
    out += '\n';
    for (Eigen::Index i = 0; i < report.model.a.rows(); ++i) {
        out += "A[" + std::to_string(i) + "]=";
        for (Eigen::Index j = 0; j < report.model.a.cols(); ++j) {
            if (j > 0) {
                out += ' ';
            }
            out += format_value(report.model.a(i, j));
        }
        out += '\n';
    }
    out += "B=";
    for (Eigen::Index i = 0; i < report.model.b.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += format_value(report.model.b(i));
    }
    out += '\n';
    out += "residual=" + format_value(report.model.residual) + "\n";
    return out;
}

void write_csv(const ForcingSignal& forcing, const std::string& path) {
    write_two_column_csv(path, "time_s,v_r", forcing.time, forcing.values);
}

}  // namespace arcsim
