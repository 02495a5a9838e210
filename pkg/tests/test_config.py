from pathlib import Path

import pytest

from ewmt.config import OUTPUT_DIR_ENV, load_config, parse_config, parse_entries
from ewmt.errors import ConfigError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = """
warping.family = linear
solve.rho0 = 1
"""


def test_grammar_comments_and_types():
    entries = parse_entries(
        """
        # full-line comment
        warping.family = polynomial   # trailing comment
        warping.coefficients = 0, 1.5, -2e-1
        sweep.workers = 3
        """
    )
    assert entries == {
        "warping.family": "polynomial",
        "warping.coefficients": (0.0, 1.5, -0.2),
        "sweep.workers": 3,
    }


@pytest.mark.parametrize(
    "text, message",
    [
        ("warping.family linear", "expected 'key = value'"),
        ("warping.colour = red", "unknown key"),
        ("warping.family = linear\nwarping.family = constant", "duplicate key"),
        ("solve.rho0 = one", "expects float"),
        ("solve.rho0 = inf", "expects float"),
        ("sweep.workers = 2.5", "expects int"),
        ("output.csv_path = ", "is empty"),
    ],
)
def test_grammar_errors(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_entries(text)


def test_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.warping.describe() == "linear(1)"
    assert cfg.elliptic.family == "zero"
    assert cfg.options.s_max == 50.0
    assert cfg.csv_path == Path("profile.csv")
    assert cfg.rho0_list == ()


@pytest.mark.parametrize(
    "extra, message",
    [
        ("solve.rho0 = -1", "rho0 must be positive"),
        ("weingarten.family = sqrt_scaled\nweingarten.alpha = 1.0", "not elliptic"),
        ("weingarten.family = sqrt_scaled", "alpha is required"),
        ("weingarten.family = custom_polynomial\nweingarten.coefficients = 10", "not elliptic"),
        ("weingarten.family = other", "must be one of"),
        ("solve.rel_tol = 0", "rel_tol must be positive"),
        ("sweep.rho0_list = 1, -2", "must be positive"),
        ("sweep.workers = 0", "at least 1"),
    ],
)
def test_validation_errors(extra, message):
    text = "warping.family = linear\n" + extra
    with pytest.raises(ConfigError, match=message):
        parse_config(text)


def test_warping_requires_family_and_coefficients():
    with pytest.raises(ConfigError, match="warping.family is required"):
        parse_config("solve.rho0 = 1")
    with pytest.raises(ConfigError, match="coefficients is required"):
        parse_config("warping.family = affine")
    with pytest.raises(ConfigError, match="takes 2"):
        parse_config("warping.family = affine\nwarping.coefficients = 1")


def test_sqrt_half_is_accepted():
    cfg = parse_config("warping.family = linear\nweingarten.family = sqrt_scaled\nweingarten.alpha = 0.5")
    assert cfg.elliptic.alpha == 0.5


def test_output_dir_override(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    cfg = parse_config(MINIMAL + "output.report_path = r.json\noutput.svg_path = /abs/p.svg")
    assert cfg.report_path == tmp_path / "r.json"
    assert cfg.csv_path == tmp_path / "profile.csv"
    assert cfg.svg_path == Path("/abs/p.svg")


def test_missing_file():
    with pytest.raises(ConfigError, match="cannot read config"):
        load_config("/nonexistent/config.cfg")


@pytest.mark.parametrize("name", ["example1", "example2", "catenary", "sweep"])
def test_shipped_configs_parse(name):
    cfg = load_config(CONFIG_DIR / f"{name}.cfg")
    assert cfg.warping.family in ("linear", "constant")
