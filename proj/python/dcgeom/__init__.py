# Copyright 2026 The dcgeom Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for dcgeom."""

from ._core import (
    ConvergenceFailure,
    IsingModel,
    NumericalDegeneracy,
    PreconditionViolation,
    SmoothPulse,
    SquarePulse,
    ValidationError,
    __version__,
    curvatures,
    error_curve,
    eval_pulse,
    inner_product,
    ising_curvatures,
    pauli,
    run,
    scaling,
    step_rotation_angle,
)

__all__ = [
    "ConvergenceFailure",
    "IsingModel",
    "NumericalDegeneracy",
    "PreconditionViolation",
    "SmoothPulse",
    "SquarePulse",
    "ValidationError",
    "__version__",
    "curvatures",
    "error_curve",
    "eval_pulse",
    "inner_product",
    "ising_curvatures",
    "pauli",
    "run",
    "scaling",
    "step_rotation_angle",
]
