"""Declarative base of the results ledger"""

from sqlalchemy.orm import DeclarativeBase


class Base(DeclarativeBase):
    """Every ledger table derives from this; ``get_engine`` creates them all"""
