
import logging

import nfadlab.util.custom_logging as _logging

TARGET_MODULE = "nfadlab.util.custom_logging"


class TestLogFilePath:

    def test_default(self, no_config_env):
        assert _logging.log_file_path() == _logging.DEFAULT_LOG_FILE

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("NFADLAB_LOG_FILE", "/tmp/run.log")
        assert _logging.log_file_path() == "/tmp/run.log"


class TestGetLogger:

    def test_configured_once(self):
        first = _logging.get_logger("nfadlab.tests.once")
        second = _logging.get_logger("nfadlab.tests.once")

        assert first is second
        assert len(first.handlers) == 2
        assert not first.propagate

    def test_default_scope(self):
        assert _logging.get_logger().name == _logging.DEFAULT_SCOPE

    def test_console_level(self, monkeypatch):
        monkeypatch.setenv("LOGLEVEL", "WARNING")
        logger = _logging.get_logger("nfadlab.tests.level")
        console = _logging._console_handlers["nfadlab.tests.level"]
        assert console.level == logging.WARNING

        _logging.set_console_level("DEBUG")
        assert console.level == logging.DEBUG
        assert logger.level == logging.DEBUG
        _logging.set_console_level("INFO")

    def test_muted_when_eliot_on_stdout(self, mocker):
        mocker.patch("{}._eliot_on_stdout".format(TARGET_MODULE), True)
        emit = mocker.patch("logging.StreamHandler.emit")
        _logging.get_logger("nfadlab.tests.muted").info("hidden")
        emit.assert_not_called()
