from .base import Base
from .result_row import RESULT_FIELDS, RESULT_KEY, ResultRow

__all__ = ["Base", "RESULT_FIELDS", "RESULT_KEY", "ResultRow"]
