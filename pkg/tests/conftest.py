import pytest

from qho.config import build_config
from qho.pipeline import run_pipeline


@pytest.fixture(scope="session")
def fig1_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig1")
    cfg = build_config(preset="fig1")
    return run_pipeline(cfg, out), out


@pytest.fixture(scope="session")
def fig2_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig2")
    cfg = build_config(preset="fig2")
    return run_pipeline(cfg, out), out
