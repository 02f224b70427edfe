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

import json
import math
import pathlib

import numpy as np
import pytest

import dcgeom

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def test_pauli_inner_product():
    z = dcgeom.pauli("IZ")
    assert z.shape == (4, 4)
    assert dcgeom.inner_product(z, z) == pytest.approx(1.0)
    assert dcgeom.inner_product(z, dcgeom.pauli("IX")) == pytest.approx(0.0)


def test_closed_form_curvatures():
    k = dcgeom.ising_curvatures(0.5, 1.0, 1.0, 0.0)
    assert k[0] == pytest.approx(2.0)
    assert k[1] == pytest.approx(math.sqrt(2.5))
    assert k[4] == 0.0


def test_step_rotation():
    assert dcgeom.step_rotation_angle(0.0, 1.0, 1.0, 1.0) == pytest.approx(math.pi / 4)


def test_error_curve_unit_speed():
    model = dcgeom.IsingModel()
    assert model.basis[0] == "IZ"
    pulse = dcgeom.SmoothPulse(0.4, [(1.1, 1.7, 0.3)], 3.0)
    t, g = dcgeom.error_curve(model, pulse, 0.005)
    assert g.shape == (len(t), 6)
    speed = np.linalg.norm(np.diff(g, axis=0), axis=1) / np.diff(t)
    assert np.max(np.abs(speed - 1.0)) < 1e-3


def test_numeric_curvature_matches_kappa1():
    model = dcgeom.IsingModel()
    pulse = dcgeom.SmoothPulse(1.2, [(0.6, 1.5, 0.4)], 3.0)
    t, kappas, flagged = dcgeom.curvatures(model, pulse)
    for i in range(0, len(t), 37):
        if not flagged[i]:
            omega, _ = dcgeom.eval_pulse(pulse, t[i])
            assert kappas[i, 0] == pytest.approx(2 * abs(omega), rel=1e-3)


def test_open_pulse_scales_linearly():
    model = dcgeom.IsingModel()
    fit = dcgeom.scaling(model, dcgeom.SquarePulse([(1.0, 5.0)]), [1e-4, 1e-3, 1e-2])
    assert 0.9 <= fit["slope"] <= 1.1


def test_invalid_pulse_raises():
    with pytest.raises(ValueError):
        dcgeom.SquarePulse([])


def test_cli_run(tmp_path):
    rc, log, err = dcgeom.run("curvatures", CONFIGS / "smooth_pulse.json", tmp_path)
    assert rc == 0, err
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["metrics"]["effective_dimension"] == 6
