# tests/test_config_logging.py
import logging

import pytest
from pydantic import ValidationError

from hamlim.core.config import Settings, get_settings
from hamlim.core.logging import configure_logging


def test_get_settings_is_cached():
    assert get_settings() is get_settings()


def test_settings_read_environment(monkeypatch):
    monkeypatch.setenv("HAMLIM_SEED", "42")
    monkeypatch.setenv("HAMLIM_LOG_LEVEL", "DEBUG")

    settings = Settings()

    assert settings.HAMLIM_SEED == 42
    assert settings.HAMLIM_LOG_LEVEL == "DEBUG"


def test_settings_defaults():
    settings = Settings()

    assert settings.APP_NAME == "hamlim"
    assert settings.DENSE_DIMENSION_CAP == 4096
    assert settings.HADAMARD_MAX_QUBITS == 12
    assert settings.TAIL_WORKERS == 1


def test_settings_reject_negative_seed(monkeypatch):
    monkeypatch.setenv("HAMLIM_SEED", "-1")

    with pytest.raises(ValidationError):
        Settings()


def test_configure_logging_installs_one_stderr_handler(capsys):
    configure_logging("info")
    logger = configure_logging("DEBUG")

    marked = [h for h in logger.handlers if getattr(h, "_hamlim_handler", False)]
    assert len(marked) == 1
    assert logger.level == logging.DEBUG

    logging.getLogger("hamlim.services.test").info("spectrum ready")
    captured = capsys.readouterr()

    assert "spectrum ready" in captured.err
    assert captured.out == ""


def test_configure_logging_rejects_unknown_levels():
    with pytest.raises(ValueError):
        configure_logging("LOUD")
