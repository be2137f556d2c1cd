from .optimize import (
    ExperimentConfig,
    ExperimentReport,
    RadiusResult,
    minimize_under_radius,
    objective,
    residual,
    scan_radii,
)
