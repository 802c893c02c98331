#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace arcsim {

// Singular value decomposition of the delay-embedding (Hankel) matrix with a
// deterministic sign convention: each left singular vector is oriented so
// its largest-magnitude entry is positive, with the matching right vector
// flipped in tandem.
struct Decomposition {
    Eigen::MatrixXd u;  // q x q, orthonormal columns
    Eigen::VectorXd s;  // singular values, descending
    Eigen::MatrixXd v;  // p x q, orthonormal columns
};

// Last retained delay coordinate, interpreted as the intermittent forcing of
// the rank-reduced linear dynamics.  values[j] is stamped at the start time
// of embedding window j.
struct ForcingSignal {
    std::vector<double> time;    // s
    std::vector<double> values;  // unit-norm coordinate of the embedding
    int rank = 0;
    std::vector<double> spectrum;
};

// Least-squares linear dynamics dv/dt = A v + B v_r over the first rank-1
// delay coordinates, forced by the last one.
struct LinearModel {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    double residual = 0.0;  // Frobenius norm of the regression misfit
};

struct ModelReport {
    int rank = 0;
    std::vector<double> spectrum;
    LinearModel model;
};

// q x (N - q + 1) delay-embedding matrix, entry (i, j) = x[i + j].
// Requires N >= 2 q so the matrix has at least as many columns as rows.
Eigen::MatrixXd build_hankel(const std::vector<double>& x, int q);

// Economy SVD with the sign convention above.  Rejects non-finite input.
Decomposition decompose(const Eigen::MatrixXd& hankel);

// Optimal-threshold weight for the singular-value cutoff at aspect ratio
// beta = q/p: 0.56 b^3 - 0.95 b^2 + 1.82 b + 1.43.
double spectral_threshold_weight(double beta);

// Number of singular values above spectral_threshold_weight(q/p) times the
// median singular value, clamped to [2, s.size()].
int select_rank(const Eigen::VectorXd& s, int q, int p);

// Fourth-order central difference
//   (-f(t+2h) + 8 f(t+h) - 8 f(t-h) + f(t-2h)) / (12 h)
// applied columnwise; the two rows at each edge have no centered stencil and
// are trimmed, so the result has 4 fewer rows than the input.
Eigen::MatrixXd differentiate(const Eigen::MatrixXd& v, double dt);

// Ordinary least squares for dv_i/dt = A v + B v_r, i = 1..r-1, using the
// first r columns of v (the last is the forcing).  The derivative rows lost
// to the difference stencil are trimmed from the regressors as well.  An
// exactly zero state history yields the zero model; a rank-deficient
// regression matrix raises decomposition_error with its condition number.
LinearModel identify(const Eigen::MatrixXd& v, double dt, int rank);

// Full pipeline: embed, decompose, select the rank, and return the last
// retained coordinate stamped at window-start times t0 + j dt.
ForcingSignal forcing_signal(const std::vector<double>& x, double dt, double t0, int q);

// forcing_signal plus the regression model, for reporting.
ModelReport analyze(const std::vector<double>& x, double dt, int q);

// Human-readable rank / spectrum / dynamics summary.
std::string format_model_report(const ModelReport& report);

// Two-column CSV export (time_s, v_r), 9 significant digits.
void write_csv(const ForcingSignal& forcing, const std::string& path);

}  // namespace arcsim
