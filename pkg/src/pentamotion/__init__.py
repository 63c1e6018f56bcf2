"""Line-symmetric self-motions of linear pentapods (Type 1 and Type 2).

Design validation and leg synthesis, tracing of the self-motion as a
line-symmetric motion, ellipsoid loci and reality intervals, basic-surface
sampling, the reflected (Krames) configuration and numeric verification
oracles.
"""

__version__ = "0.1.0"

from .design import DesignParams, LegParams, PentapodType, anchors, classify, leg_params, legs_for, p5_from_r1, r1_from_p5
from .errors import NumericalError, PentamotionError, ValidationError
from .geometry import center_point, ellipsoid_for, locus_point, sigma_P
from .kinematics import (
    Displacement,
    PluckerLine,
    StudyPose,
    direction_from_h,
    displacement_from_pose,
    plucker_from_pose,
    reflect_in_line,
)
from .polynomials import HomogPoly3
from .reality import pedal_points, reality_interval, workspace_free
from .selfmotion import (
    QuarticH,
    SelfMotion,
    constraint_residuals,
    factorization_check,
    h_from_p5,
    line_symmetric_frame,
    p5_from_h,
    recover_F,
    recover_G,
    solve_f,
    trace_motion,
    trace_motion_special_v0,
)
from .surface import generators, krames_reflect, quintic_residual, sample_basic_surface
from .tolerance import get_tolerance, set_tolerance, tolerance
from .verification import appendix_cubics_check, fit_sphere, motion_residual_report, sphere_condition

__all__ = [
    "__version__",
    "DesignParams", "LegParams", "PentapodType", "anchors", "classify", "leg_params", "legs_for",
    "p5_from_r1", "r1_from_p5",
    "NumericalError", "PentamotionError", "ValidationError",
    "center_point", "ellipsoid_for", "locus_point", "sigma_P",
    "Displacement", "PluckerLine", "StudyPose", "direction_from_h", "displacement_from_pose",
    "plucker_from_pose", "reflect_in_line",
    "HomogPoly3",
    "pedal_points", "reality_interval", "workspace_free",
    "QuarticH", "SelfMotion", "constraint_residuals", "factorization_check", "h_from_p5",
    "line_symmetric_frame", "p5_from_h", "recover_F", "recover_G", "solve_f", "trace_motion",
    "trace_motion_special_v0",
    "generators", "krames_reflect", "quintic_residual", "sample_basic_surface",
    "get_tolerance", "set_tolerance", "tolerance",
    "appendix_cubics_check", "fit_sphere", "motion_residual_report", "sphere_condition",
]
