"""LRCAvail: locally recoverable codes with availability."""

from .errors import LRCError
from .galois import BaseField, FieldTower, build_base_field, build_tower
from .constructions import CompositeCode, LinearCode, build_wzl

__version__ = "0.1.0"

__all__ = [
    "BaseField",
    "CompositeCode",
    "FieldTower",
    "LRCError",
    "LinearCode",
    "build_base_field",
    "build_tower",
    "build_wzl",
]
