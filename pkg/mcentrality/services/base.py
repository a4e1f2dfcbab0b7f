from typing import Any, Generic, Iterable, List, Optional, Type, TypeVar

from sqlalchemy import select
from sqlalchemy.exc import NoResultFound

from config.db import Base, session_scope

T = TypeVar("T", bound=Base)


class BaseService(Generic[T]):
    model: Type[T]

    def __init__(self, model: Type[T], db_url: Optional[str] = None):
        self.model = model
        self.db_url = db_url

    def create(self, **kwargs: Any) -> T:
        with session_scope(self.db_url) as session:
            obj = self.model(**kwargs)
            session.add(obj)
            session.flush()
            return obj

    def bulk_create(self, rows: Iterable[dict[str, Any]]) -> int:
        objs = [self.model(**row) for row in rows]
        with session_scope(self.db_url) as session:
            session.add_all(objs)
        return len(objs)

    def get(self, obj_id: int) -> Optional[T]:
        with session_scope(self.db_url) as session:
            return session.get(self.model, obj_id)

    def list(self, limit: int = 100, **filters: Any) -> List[T]:
        stmt = select(self.model).filter_by(**filters).limit(limit)
        with session_scope(self.db_url) as session:
            return list(session.scalars(stmt))

    def delete(self, obj_id: int) -> bool:
        with session_scope(self.db_url) as session:
            obj = session.get(self.model, obj_id)
            if obj is None:
                raise NoResultFound(f"{self.model.__name__} not found with id {obj_id}")
            session.delete(obj)
            return True
