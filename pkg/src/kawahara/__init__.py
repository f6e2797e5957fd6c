"""Half-line initial-boundary value numerics for u_t - u_xxxxx + F(u) = 0."""

import os as _os

# KAWAHARA_THREADS caps the BLAS/OpenMP pools; it must be read before numpy loads.
if "KAWAHARA_THREADS" in _os.environ:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _os.environ["KAWAHARA_THREADS"])

from .forcing import L0, L_lambda, trace_constant  # noqa: E402
from .fractional import HalfLineSignal, rl_apply, rl_integrate  # noqa: E402
from .kernel import MINUS, PLUS, closed_form_at_zero, eval_B, mellin_B  # noqa: E402
from .nonlinearity import NonlinearityKind, apply_F, resonance_G, resonance_H, scaling_map  # noqa: E402
from .norms import SobolevIndex, dalpha_norm, xsb_norm, ysb_norm, z_norm  # noqa: E402
from .probe import ProbeReport, probe_block_estimate, probe_theorem_ratio, strichartz_probe  # noqa: E402
from .propagator import propagate  # noqa: E402
from .solver import IBVPData, NonConvergenceError, picard_solve  # noqa: E402
from .spectral import Field1D, Field2D, Grid1D, SpaceTimeGrid  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "L0", "L_lambda", "trace_constant", "HalfLineSignal", "rl_apply", "rl_integrate", "MINUS", "PLUS",
    "closed_form_at_zero", "eval_B", "mellin_B", "NonlinearityKind", "apply_F", "resonance_G", "resonance_H",
    "scaling_map", "SobolevIndex", "dalpha_norm", "xsb_norm", "ysb_norm", "z_norm", "ProbeReport",
    "probe_block_estimate", "probe_theorem_ratio", "strichartz_probe", "propagate", "IBVPData",
    "NonConvergenceError", "picard_solve", "Field1D", "Field2D", "Grid1D", "SpaceTimeGrid",
]
