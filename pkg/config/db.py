from contextlib import contextmanager
from functools import lru_cache
from typing import Generator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import DeclarativeBase, Session, sessionmaker

from config.config import Config


class Base(DeclarativeBase):
    pass


@lru_cache(maxsize=None)
def get_engine(url: Optional[str] = None) -> Engine:
    return create_engine(url or Config.DATABASE_URL, future=True)


@lru_cache(maxsize=None)
def get_session_factory(url: Optional[str] = None) -> sessionmaker[Session]:
    # rows are read after commit by the CLI writers
    return sessionmaker(
        bind=get_engine(url), autoflush=False, autocommit=False, expire_on_commit=False
    )


def init_db(url: Optional[str] = None) -> None:
    """Create missing tables; the alembic migration describes the same schema."""
    import mcentrality.db_models  # noqa: F401

    Base.metadata.create_all(get_engine(url))


@contextmanager
def session_scope(url: Optional[str] = None) -> Generator[Session, None, None]:
    """Transactional scope for queries."""
    session = get_session_factory(url)()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
