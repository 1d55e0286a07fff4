"""Config file parsing, overrides, and echo round-trips."""

import pytest

from pulseboost.errors import ParseError
from pulseboost.runconfig import (
    RunConfig,
    build_run_config,
    load_run_config,
    parse_categories,
    parse_combinations,
    parse_config_file,
)


def test_defaults_match_reproduced_setup():
    cfg = RunConfig()
    assert cfg.train.n_trees == 1500
    assert cfg.train.learning_rate == 0.01
    assert cfg.train.max_depth == 8
    assert cfg.segments.window == 30
    assert cfg.segments.overlap == 10
    assert cfg.ratios == (0.8, 0.1, 0.1)
    assert cfg.aggregation == "feature_mean"


def test_file_values_layered_over_defaults(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(
        "# comment\n"
        "n_trees = 33\n"
        "learning_rate = 0.2\n"
        "window = 12\n"
        "overlap = 4\n"
        "seed = 9\n"
        "categories = heart_rate+landmark_2d\n"
        "combinations = heart_rate; eye_landmark+head_pose\n"
    )
    cfg = load_run_config(p)
    assert cfg.train.n_trees == 33
    assert cfg.train.learning_rate == 0.2
    assert cfg.train.seed == 9 and cfg.seed == 9
    assert cfg.segments.window == 12
    assert cfg.categories == ("heart_rate", "landmark_2d")
    assert cfg.combinations == (("heart_rate",), ("eye_landmark", "head_pose"))


def test_overrides_win_over_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("n_trees = 33\nseed = 1\n")
    cfg = load_run_config(p, {"n_trees": "44", "max_depth": "5"})
    assert cfg.train.n_trees == 44
    assert cfg.train.max_depth == 5


def test_unknown_key_rejected(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("ntrees = 12\n")
    with pytest.raises(ParseError):
        parse_config_file(p)
    with pytest.raises(ParseError):
        load_run_config(None, {"bogus": "1"})


def test_missing_equals_sign(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("n_trees 12\n")
    with pytest.raises(ParseError) as exc:
        parse_config_file(p)
    assert exc.value.line == 1


def test_bad_value_type():
    with pytest.raises(ParseError):
        build_run_config({"n_trees": "many"})


def test_invalid_domain_value():
    with pytest.raises(ParseError):
        build_run_config({"learning_rate": "0"})
    with pytest.raises(ParseError):
        build_run_config({"window": "10", "overlap": "10"})
    with pytest.raises(ParseError):
        build_run_config({"aggregation": "median"})


def test_parse_helpers():
    assert parse_combinations("default") is None
    assert parse_combinations("a+b; c") == (("a", "b"), ("c",))
    assert parse_categories("all") is None
    assert parse_categories("heart_rate, shape") == ("heart_rate", "shape")
    with pytest.raises(ValueError):
        parse_combinations(";")


def test_flat_echo_round_trip():
    cfg = load_run_config(None, {
        "n_trees": "17", "seed": "5", "combinations": "heart_rate",
        "categories": "shape",
    })
    flat = cfg.as_flat_dict()
    again = build_run_config(dict(flat))
    assert again == cfg


def test_seed_propagates_into_train_config():
    cfg = load_run_config(None, {"seed": "123"})
    assert cfg.train.seed == 123
