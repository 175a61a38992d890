import math
import os

import numpy as np
import pytest

import sweepkit

SCENES = os.environ.get("SWEEPKIT_SCENES_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "scenes"))


def scene(name):
    return sweepkit.load_scene(os.path.join(SCENES, name))


def test_translating_sphere_funnel_is_a_great_circle():
    s = scene("translating_sphere.yaml")
    curves = sweepkit.trace_slice(s, 0.5)
    assert len(curves) == 1
    xyz = curves[0]["xyz"]
    assert xyz.shape[1] == 3 and xyz.shape[0] > 10
    # unit sphere moving along x: contact curve sits in a plane normal to x, radius 1
    centre = np.array([xyz[0, 0], 0.0, 0.0])
    assert np.allclose(np.linalg.norm(xyz - centre, axis=1), 1.0, atol=1e-8)
    assert np.ptp(xyz[:, 0]) < 1e-8


def test_theta_and_clearance_on_snapped_point():
    s = scene("circular_sphere.yaml")
    fp = sweepkit.snap_to_funnel(s, 0.3, 0.2, 0.4)
    assert abs(fp.eval.f) < 1e-10
    th = sweepkit.theta(s, fp)
    assert math.isfinite(th)
    ts, lam = sweepkit.clearance_profile(s, fp, 0.05, 11)
    assert len(ts) == len(lam) == 11


def test_detect_report_matches_cli_layout():
    s = scene("cylinder_example1.yaml")
    r = sweepkit.detect(s, nt=11)
    assert r["verdict"] != "clean"
    assert r["minTheta"] <= -2.3
    assert r["sampleCount"] == len(r["samples"])


def test_envelope_mesh_and_eval():
    s = scene("translating_sphere.yaml")
    env = sweepkit.Envelope(s, nt=6, np=24)
    assert env.closed
    jet = env.eval(0.25, 0.5)
    assert jet["residual_funnel"] < 1e-9
    verts, tris, theta = env.mesh(16)
    assert verts.shape == (256, 3)
    assert tris.max() < 256
    assert len(theta) == 256
    samples, violations = env.validate_assumption(32)
    assert samples > 0 and not violations


def test_bad_yaml_raises_config_error():
    with pytest.raises(sweepkit.ConfigError, match="line"):
        sweepkit.load_scene_from_string("id: x\nsurface: {kind: blob}\n")
