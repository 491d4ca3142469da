#ifndef GRAPHCOV_ESTIMATORS_H_
#define GRAPHCOV_ESTIMATORS_H_

#include <string>
#include <vector>

#include "graphcov/common.h"
#include "graphcov/spectral_models.h"
#include "graphcov/stationary.h"

namespace graphcov {

enum class EstimatorMethod { kLs, kNnls, kWls };

std::string to_string(EstimatorMethod method);
EstimatorMethod estimator_method_from_string(const std::string& name);

struct EstimationResult {
  Vector theta;
  double residual_norm = 0.0;
  EstimatorMethod method = EstimatorMethod::kLs;
  double condition_number = 0.0;
};

struct FisherInfo {
  Matrix matrix;
  double nu = 0.5;
  int n_snapshots = 0;
  Matrix crb;
  // Set when F is numerically singular and crb holds its pseudo-inverse.
  bool crb_is_pseudo_inverse = false;
};

// theta = argmin ||r - G theta|| over real theta (real-stacked when complex).
EstimationResult ls_estimate(const ObservationModel& model, const CVector& r_y);

// Same objective subject to theta >= 0 (Lawson-Hanson active set).
EstimationResult nnls_estimate(const ObservationModel& model, const CVector& r_y);

struct WlsOptions {
  bool regularize = true;
};

// One-step weighted LS with weight nu Ns (R^-T (x) R^-1) built from r_hat_cov.
// Requires a square-block model (block_size > 0).
EstimationResult wls_estimate(const ObservationModel& model, const CVector& r_hat,
                              const CovarianceMatrix& r_hat_cov, double nu,
                              const WlsOptions& options = {});

// max_i |Re g_i^H C_w (G theta - r_hat)| / max_i |Re g_i^H C_w r_hat|, with
// C_w from r_hat_cov (regularized as in wls_estimate).
double wls_stationarity_residual(const ObservationModel& model, const Vector& theta,
                                 const CVector& r_hat,
                                 const CovarianceMatrix& r_hat_cov);

// F_ij = nu Ns Re tr(R^-1 G_i R^-1 G_j^H); crb = F^-1.
FisherInfo fisher_info(const ObservationModel& model, const CovarianceMatrix& r_y,
                       int n_snapshots, double nu);

enum class NmseNorm { kAsPrinted, kSquared };

// 10 log10( sum_m ||p - p_m||^2 / (N_exp ||p||) ), or ||p||^2 in the
// denominator with kSquared. Floored at -300 dB.
double nmse(const Vector& true_p, const std::vector<Vector>& estimates,
            NmseNorm norm = NmseNorm::kAsPrinted);

// Same normalization applied to a total squared error already summed over
// `count` trials.
double nmse_from_sse(const Vector& true_p, double sse, int count,
                     NmseNorm norm = NmseNorm::kAsPrinted);

inline constexpr double kNmseFloorDb = -300.0;

}  // namespace graphcov

#endif  // GRAPHCOV_ESTIMATORS_H_
