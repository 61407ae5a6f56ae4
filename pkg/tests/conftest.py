import pytest
from hypothesis import HealthCheck, settings

from fareyprod import config_handler
from fareyprod.sieves import INT64_N_MAX, build_tables

settings.register_profile(
    "fareyprod", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("fareyprod")


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Keep the user's ~/.fareyprodrc, ./config.toml and FAREY_* variables out of every test"""
    monkeypatch.setattr(config_handler, "CONFIG_FILE", tmp_path / ".fareyprodrc")
    monkeypatch.chdir(tmp_path)
    for env_name in config_handler.ENV_KEYS.values():
        monkeypatch.delenv(env_name, raising=False)
    monkeypatch.setattr(config_handler, "load_dotenv", lambda **kwargs: False)


@pytest.fixture(scope="session")
def tables():
    return build_tables(100_000, ceiling=INT64_N_MAX)


@pytest.fixture(scope="session")
def big_tables():
    # p² − 1 for every prime p < 1000
    return build_tables(1_000_000, ceiling=INT64_N_MAX)
