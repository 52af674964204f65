"""SQLAlchemy SessionMaker for the results ledger"""

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import sessionmaker

from rimc_calibration.config import RESULTS_DB_URL
from rimc_calibration.exceptions import ConfigError
from rimc_calibration.models.base import Base

_db_engines: dict[str, Engine] = {}
_session_makers: dict[str, sessionmaker] = {}


def _resolve_url(url: str | None) -> str:
    resolved = url or RESULTS_DB_URL
    if not resolved:
        raise ConfigError("no results database URL: pass one or set RIMC_RESULTS_DB_URL")
    return resolved


def get_engine(url: str | None = None) -> Engine:
    """Get database engine for ``url``, creating it (and the schema) if necessary

    Args:
        url (str | None): SQLAlchemy URL, defaults to RIMC_RESULTS_DB_URL

    Returns:
        Engine: SQLAlchemy database engine

    Raises:
        ConfigError: If neither ``url`` nor RIMC_RESULTS_DB_URL is set
        sqlalchemy.exc.SQLAlchemyError: If database engine creation fails
    """
    resolved = _resolve_url(url)
    if resolved not in _db_engines:
        engine = create_engine(resolved, pool_pre_ping=True)
        Base.metadata.create_all(engine)
        _db_engines[resolved] = engine
    return _db_engines[resolved]


def get_session_maker(url: str | None = None) -> sessionmaker:
    """Get session maker, creating it if necessary

    Raises:
        ConfigError: If no database URL is configured
    """
    resolved = _resolve_url(url)
    if resolved not in _session_makers:
        _session_makers[resolved] = sessionmaker(bind=get_engine(resolved))
    return _session_makers[resolved]


def SessionMaker(url: str | None = None):
    """Lazy-loaded session

    Returns:
        Session: SQLAlchemy database session
    """
    return get_session_maker(url)()


def sqlite_url(path: str) -> str:
    return f"sqlite:///{path}"


def dispose_engines() -> None:
    """Close every cached engine (used when a sweep finishes and by tests)"""
    for engine in _db_engines.values():
        engine.dispose()
    _db_engines.clear()
    _session_makers.clear()
