import logging

import pytest

from backend.config import Settings, configure_logging


def test_defaults(quiet_env):
    s = Settings.from_env()
    assert s.enumeration_budget == 10**6
    assert s.seed == 0
    assert s.log_file is None


def test_environment_and_overrides(quiet_env, monkeypatch):
    monkeypatch.setenv('LEIBNIZ_BUDGET', '5000  # small machine')
    monkeypatch.setenv('LEIBNIZ_SEED', '9')
    s = Settings.from_env(seed=3)
    assert s.enumeration_budget == 5000
    assert s.seed == 3


def test_invalid_values_rejected(quiet_env, monkeypatch):
    monkeypatch.setenv('LEIBNIZ_BUDGET', '0')
    with pytest.raises(ValueError):
        Settings.from_env()


def test_configure_logging_writes_file(tmp_path, monkeypatch):
    log_file = tmp_path / 'run.log'
    root = logging.getLogger()
    saved = root.handlers[:]
    monkeypatch.setattr(root, 'handlers', [])
    configure_logging(Settings(log_file=str(log_file)))
    logging.getLogger('LeibnizCore').info("hello")
    for handler in root.handlers:
        handler.flush()
    root.handlers = saved
    assert 'LeibnizCore - INFO - hello' in log_file.read_text()
