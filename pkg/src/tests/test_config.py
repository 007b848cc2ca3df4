"""
Tests for settings resolution: file, then environment, then defaults
"""

import pytest

from config import Config, get_app_info


def test_defaults_without_settings_file(tmp_path):
    cfg = Config(str(tmp_path / "missing.toml"))
    assert cfg.density == 512
    assert cfg.min_density == 64
    assert cfg.margin == pytest.approx(0.02)
    assert cfg.validate_config()


def test_settings_file_wins_over_environment(tmp_path, monkeypatch):
    settings = tmp_path / "polya.toml"
    settings.write_text('[contour]\ndensity = 256\n\n[analysis]\nseed = 11\n', encoding="utf-8")
    monkeypatch.setenv("POLYA_DENSITY", "1024")
    cfg = Config(str(settings))
    assert cfg.density == 256
    assert cfg.seed == 11


def test_environment_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("POLYA_SEED", "7")
    monkeypatch.setenv("POLYA_DEBUG_MODE", "TRUE")
    cfg = Config(str(tmp_path / "missing.toml"))
    assert cfg.seed == 7
    assert cfg.debug_mode


def test_invalid_values_fail_validation(tmp_path):
    settings = tmp_path / "polya.toml"
    settings.write_text('[contour]\nmargin = 1.5\n', encoding="utf-8")
    assert not Config(str(settings)).validate_config()


def test_missing_setting_raises(tmp_path):
    cfg = Config(str(tmp_path / "missing.toml"))
    with pytest.raises(ValueError):
        cfg._get_setting("POLYA_NOT_SET_ANYWHERE", "nowhere", "nothing")


def test_as_dict_and_app_info():
    assert set(Config().as_dict()) >= {"seed", "density", "margin", "quad_tol"}
    assert get_app_info()["name"] == "polya-carlson"
