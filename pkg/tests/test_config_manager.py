import json
import logging

from utils.config_manager import AppConfig, ConfigManager, resolve_path
from utils.logger import log_performance


class TestConfigManager:
    def test_loads_test_config(self, test_config_path):
        manager = ConfigManager(test_config_path)
        config = manager.config
        assert config.environment == "test"
        assert config.solver.tol == 1e-8
        assert config.solver.omega_scale == 5.0
        assert config.norms.max_iter == 20000
        assert config.bench.workers == 2
        assert config.logging.log_file == ""
        assert manager.validate_config() == (True, [])

    def test_environment_selects_file(self, monkeypatch):
        monkeypatch.delenv("CONFIG_PATH", raising=False)
        monkeypatch.setenv("ENVIRONMENT", "test")
        assert ConfigManager().config.environment == "test"
        monkeypatch.setenv("ENVIRONMENT", "production")
        assert ConfigManager().config.environment == "production"

    def test_config_path_override(self, monkeypatch, test_config_path):
        monkeypatch.setenv("CONFIG_PATH", test_config_path)
        monkeypatch.setenv("ENVIRONMENT", "production")
        assert ConfigManager().config_path == test_config_path

    def test_missing_file_gives_defaults(self, tmp_path):
        config = ConfigManager(str(tmp_path / "none.json")).config
        assert config.solver.max_iter == 1000
        assert config.bench.it_mismatch_threshold == 2

    def test_invalid_json_gives_defaults(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert ConfigManager(str(path)).config.app_name == AppConfig().app_name

    def test_validation_errors(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"solver": {"tol": 0.0, "max_iter": 0},
                                    "bench": {"parameter_book": str(tmp_path / "missing.json")}}),
                        encoding="utf-8")
        valid, errors = ConfigManager(str(path)).validate_config()
        assert not valid
        assert len(errors) == 3

    def test_save_round_trip(self, tmp_path):
        manager = ConfigManager(str(tmp_path / "saved.json"))
        manager.config.solver.max_iter = 77
        assert manager.save_config()
        assert ConfigManager(str(tmp_path / "saved.json")).config.solver.max_iter == 77

    def test_resolve_path(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        resolved = resolve_path("./configs/parameter_book.json")
        assert resolved.endswith("parameter_book.json")
        assert resolved != "./configs/parameter_book.json"
        assert resolve_path("./nowhere.json") == "./nowhere.json"


def test_log_performance_keeps_result_and_name():
    @log_performance(logging.getLogger("test"))
    def add(a, b):
        return a + b

    assert add(2, 3) == 5
    assert add.__name__ == "add"
