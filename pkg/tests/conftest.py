import pathlib

import pytest
from hypothesis import HealthCheck, settings

from wfcheck import load_context, load_narration

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=100,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("ci")

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
CORPUS = REPO_ROOT / "corpus"


@pytest.fixture(scope="session")
def woolam_mod():
    ctx = load_context(CORPUS / "woolam_modified.ctx")
    narr = load_narration(CORPUS / "woolam_modified.proto", ctx)
    return narr, ctx


@pytest.fixture(scope="session")
def woolam_orig():
    ctx = load_context(CORPUS / "woolam_original.ctx")
    narr = load_narration(CORPUS / "woolam_original.proto", ctx)
    return narr, ctx
