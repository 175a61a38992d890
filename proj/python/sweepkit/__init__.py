"""Contact sets, theta invariant and procedural envelopes of swept surfaces."""

import json

from ._sweepkit import *  # noqa: F401,F403
from ._sweepkit import __version__, detect_json


def detect(scene, nt=10, refine=True):
    """L.S.I. report as a dict (same layout as the CLI's JSON)."""
    return json.loads(detect_json(scene, nt, refine))
