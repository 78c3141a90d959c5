"""Robust fitting of the generalized exponential distribution.

Minimum density power divergence estimation with closed-form asymptotics,
six classical estimators for comparison, data-driven tuning-parameter
selection, contamination experiments, and model diagnostics.
"""

from .asymptotics import (AsympCov, InfluenceCurve, are, influence_curve,
                          influence_function, j_matrix, sandwich_sigma,
                          xi_vector)
from .diagnostics import (GofReport, OutlierReport, acf_pacf,
                          flag_outliers_adjusted_boxplot, ks_bootstrap_test,
                          ks_statistic, medcouple, trend_pvalue)
from .estimator_api import GeneralizedExponential
from .estimators import (FitError, FitResult, fit_lm, fit_ls, fit_ml, fit_mm,
                         fit_pt, fit_wls)
from .gedist import (GEParams, MomentSummary, ge_cdf, ge_logpdf, ge_moments,
                     ge_pdf, ge_quantile, ge_sample)
from .mdpde import (CvmCurve, DpdConfig, estimating_equations, fit_mdpde,
                    h_objective, score_vector, select_alpha_cvm, v_alpha)
from .sample import Sample
from .simharness import (ContaminationSpec, MethodSpec, SimTable,
                         make_outlier_value, run_contamination_study)

__version__ = "0.1.0"
