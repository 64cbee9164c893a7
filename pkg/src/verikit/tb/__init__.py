"""Testbenches; importing this package registers every test."""

from . import adc, alu, ecc  # noqa: F401
