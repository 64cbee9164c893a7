"""Functional coverage: covergroups, bins, crosses and the XML coverage database."""

from .model import (
    Bin,
    CoverageDb,
    CoverageError,
    Covergroup,
    Coverpoint,
    Cross,
    merge,
    percent,
)
from .xmldb import CoverageDbError, from_xml, read_coverage_db, to_xml, write_coverage_db

__all__ = [
    "Bin", "CoverageDb", "CoverageDbError", "CoverageError", "Covergroup",
    "Coverpoint", "Cross", "from_xml", "merge", "percent", "read_coverage_db",
    "to_xml", "write_coverage_db",
]
