"""
Configuration Management System
Handles loading and validation of configuration files
"""
import os
import json
import logging
from typing import Dict, Any, Optional
from dataclasses import dataclass, asdict
from pathlib import Path


log = logging.getLogger("ConfigManager")

PROJECT_ROOT = Path(__file__).resolve().parents[2]


def resolve_path(path: str) -> str:
    """Relative paths that do not exist from the working directory are taken from the project root"""
    if not path or os.path.isabs(path) or os.path.exists(path):
        return path
    candidate = PROJECT_ROOT / path
    return str(candidate) if candidate.exists() else path


@dataclass
class SolverDefaults:
    """Solver defaults (RES tolerance, iteration cap, divergence guard, Omega = scale * I)"""
    tol: float = 1e-8
    max_iter: int = 1000
    divergence_cap: float = 1e10
    omega_scale: float = 5.0


@dataclass
class NormConfig:
    """Power-iteration settings for spectral norm estimates"""
    tol: float = 1e-10
    max_iter: int = 20000


@dataclass
class BenchConfig:
    """Benchmark harness configuration"""
    parameter_book: str = "./configs/parameter_book.json"
    output_dir: str = "./results"
    workers: int = 1
    it_mismatch_threshold: int = 2
    table1_rel_tol: float = 0.05


@dataclass
class LoggingConfig:
    """Logging Configuration"""
    level: str = "INFO"
    verbose: bool = False
    log_file: str = "./logs/vncp.log"
    max_file_size: int = 10485760  # 10MB
    backup_count: int = 5


@dataclass
class AppConfig:
    """Main Application Configuration"""
    app_name: str = "vncp-splitting"
    version: str = "1.0.0"
    environment: str = "development"
    solver: SolverDefaults = None
    norms: NormConfig = None
    bench: BenchConfig = None
    logging: LoggingConfig = None

    def __post_init__(self):
        if self.solver is None:
            self.solver = SolverDefaults()
        if self.norms is None:
            self.norms = NormConfig()
        if self.bench is None:
            self.bench = BenchConfig()
        if self.logging is None:
            self.logging = LoggingConfig()


class ConfigManager:
    """Configuration Manager"""

    def __init__(self, config_path: str = None):
        self.config_path = resolve_path(config_path or self._get_default_config_path())
        self.config = self.load_config()

    def _get_default_config_path(self) -> str:
        """Get default configuration path based on environment"""
        override = os.getenv("CONFIG_PATH")
        if override:
            return override
        env = os.getenv("ENVIRONMENT", "development").lower()
        if env in ["production", "prod"]:
            return "./configs/production_config.json"
        elif env in ["test", "testing"]:
            return "./configs/test_config.json"
        else:  # development, dev, or any other value
            return "./configs/base_config.json"

    def load_config(self) -> AppConfig:
        """Load configuration from file"""
        if not os.path.exists(self.config_path):
            log.warning(f"⚠️ Config file not found: {self.config_path}, using defaults")
            return self._create_default_config()

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                config_data = json.load(f)

            return self._parse_config(config_data)

        except (OSError, ValueError, TypeError) as e:
            log.warning(f"⚠️ Error loading config {self.config_path}: {e}, using defaults")
            return self._create_default_config()

    def _parse_config(self, config_data: Dict[str, Any]) -> AppConfig:
        """Parse configuration dictionary into AppConfig"""
        return AppConfig(
            app_name=config_data.get("app_name", "vncp-splitting"),
            version=config_data.get("version", "1.0.0"),
            environment=config_data.get("environment", "development"),
            solver=SolverDefaults(**config_data.get("solver", {})),
            norms=NormConfig(**config_data.get("norms", {})),
            bench=BenchConfig(**config_data.get("bench", {})),
            logging=LoggingConfig(**config_data.get("logging", {}))
        )

    def _create_default_config(self) -> AppConfig:
        """Create default configuration"""
        return AppConfig()

    def save_config(self, config: AppConfig = None) -> bool:
        """Save configuration to file"""
        if config is None:
            config = self.config

        try:
            directory = os.path.dirname(self.config_path)
            if directory:
                os.makedirs(directory, exist_ok=True)

            with open(self.config_path, "w", encoding="utf-8") as f:
                json.dump(asdict(config), f, indent=2, ensure_ascii=False)

            return True

        except OSError as e:
            log.error(f"❌ Error saving config: {e}")
            return False

    def validate_config(self) -> tuple[bool, list]:
        """Validate configuration and return errors if any"""
        errors = []
        solver = self.config.solver

        if not solver.tol > 0:
            errors.append("solver.tol must be positive")
        if solver.max_iter < 1:
            errors.append("solver.max_iter must be at least 1")
        if not solver.omega_scale > 0:
            errors.append("solver.omega_scale must be positive")
        if not solver.divergence_cap > 0:
            errors.append("solver.divergence_cap must be positive")

        if not self.config.norms.tol > 0:
            errors.append("norms.tol must be positive")
        if self.config.norms.max_iter < 1:
            errors.append("norms.max_iter must be at least 1")

        if self.config.bench.workers < 1:
            errors.append("bench.workers must be at least 1")
        if not os.path.exists(resolve_path(self.config.bench.parameter_book)):
            errors.append(f"Parameter book not found: {self.config.bench.parameter_book}")

        return len(errors) == 0, errors

    def describe(self) -> Optional[str]:
        """One-line summary for the log"""
        return (f"{self.config.app_name} v{self.config.version} "
                f"[{self.config.environment}] from {self.config_path}")
