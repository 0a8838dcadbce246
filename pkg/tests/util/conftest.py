
import pytest


@pytest.fixture()
def no_config_env(monkeypatch):
    """
    Remove the configuration and log file environment variables.
    """
    monkeypatch.delenv("NFADLAB_CONFIG", raising=False)
    monkeypatch.delenv("NFADLAB_LOG_FILE", raising=False)
