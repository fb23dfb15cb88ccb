"""
Basic setup tests for the Boolean reservoir lab.
Verifies that the application settings and package layout are in place.
"""

import logging
import sys
from pathlib import Path

import pytest

# Add src directory to Python path
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from config.settings import (
    LOG_FORMAT,
    AppConfig,
    ParallelConfig,
    SimulationDefaults,
    configure_logging,
    get_config,
    get_parallel_config,
    get_simulation_defaults,
)


class TestProjectSetup:
    """Test basic project setup and configuration."""

    def test_config_loading(self):
        """Test that configuration loads without errors."""
        config = AppConfig()
        assert config is not None
        assert config.app_name == "Boolean Reservoir Lab"
        assert config.version == "1.0.0"

    def test_cached_instance(self):
        """get_config returns one process-wide instance."""
        assert get_config() is get_config()

    def test_parallel_config(self):
        parallel = get_parallel_config()
        assert parallel.max_workers >= 1
        assert parallel.chunk_size >= 1

    def test_simulation_defaults(self):
        defaults = get_simulation_defaults()
        assert defaults.engine in ("event", "fixed")
        assert defaults.max_events == 1_000_000

    def test_environment_detection(self, monkeypatch):
        """Test environment detection methods."""
        monkeypatch.delenv("BRLAB_ENVIRONMENT", raising=False)
        config = AppConfig()

        # Default should be development
        assert config.environment == "development"
        assert config.is_development()
        assert not config.is_production()

    def test_environment_variables(self, monkeypatch):
        monkeypatch.setenv("BRLAB_ENVIRONMENT", "production")
        monkeypatch.setenv("BRLAB_LOG_LEVEL", "debug")
        monkeypatch.setenv("BRLAB_MAX_WORKERS", "4")
        monkeypatch.setenv("BRLAB_ENGINE", "fixed")
        config = AppConfig()
        assert config.is_production()
        assert config.log_level == "DEBUG"
        assert config.parallel.max_workers == 4
        assert config.simulation.engine == "fixed"

    def test_invalid_values_rejected(self):
        with pytest.raises(ValueError):
            AppConfig(environment="staging")
        with pytest.raises(ValueError):
            AppConfig(log_level="LOUD")
        with pytest.raises(ValueError):
            SimulationDefaults(engine="analog")
        with pytest.raises(ValueError):
            ParallelConfig(max_workers=0)

    def test_config_to_dict(self):
        """Test configuration serialization."""
        config_dict = AppConfig().to_dict()

        assert isinstance(config_dict, dict)
        assert "app_name" in config_dict
        assert "simulation" in config_dict
        assert "parallel" in config_dict
        assert "output_dir" in config_dict

    def test_configure_logging(self):
        configure_logging("WARNING")
        root = logging.getLogger()
        assert root.level == logging.WARNING
        assert any(h.formatter is not None and h.formatter._fmt == LOG_FORMAT for h in root.handlers)
        configure_logging("INFO")


class TestPackageLayout:
    """The library imports cleanly and exposes its main entry points."""

    def test_package_imports(self):
        import boolean_reservoir

        assert boolean_reservoir.__version__ == "1.0.0"
        assert callable(boolean_reservoir.build_reservoir)

    def test_exception_hierarchy(self):
        from boolean_reservoir.exceptions import (
            ConfigurationError,
            HdlEmissionError,
            ReservoirLabError,
            SimulationError,
        )

        assert issubclass(ConfigurationError, ValueError)
        assert issubclass(HdlEmissionError, ReservoirLabError)
        error = SimulationError("boom", stage="train")
        assert str(error) == "[train] boom"
        assert SimulationError("boom").with_stage("decay").stage == "decay"

    def test_project_files(self):
        root = Path(__file__).parent.parent
        for name in ("setup.py", "requirements.txt", "README.md", "health_check.py", "pytest.ini"):
            assert (root / name).exists(), name


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
