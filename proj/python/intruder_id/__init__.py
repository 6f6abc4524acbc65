"""MAP identification of feedback-controlled aerial intruders (bird vs. drone)."""

from ._core import (
    ClassLabel,
    ClassStatistics,
    DetectionReport,
    DetectorSpec,
    ModelConfig,
    NumericalError,
    ParameterError,
    build_detector,
    cdf_quadratic_form,
    class_statistics,
    conditional_error,
    detect,
    detect_simplified,
    detect_stream,
    fit_class_statistics,
    kms_inverse_apply,
    kms_logdet,
    kms_quadratic_form,
    q_sigma_eigenvalues,
    simulate_batch,
    simulate_trajectory,
    total_error,
)

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "ClassStatistics",
    "DetectionReport",
    "DetectorSpec",
    "ModelConfig",
    "NumericalError",
    "ParameterError",
    "build_detector",
    "cdf_quadratic_form",
    "class_statistics",
    "conditional_error",
    "detect",
    "detect_simplified",
    "detect_stream",
    "fit_class_statistics",
    "kms_inverse_apply",
    "kms_logdet",
    "kms_quadratic_form",
    "q_sigma_eigenvalues",
    "simulate_batch",
    "simulate_trajectory",
    "total_error",
]
