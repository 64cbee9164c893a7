"""Clocked simulation kernel, UVM-style methodology layer, constrained random
stimulus, functional coverage and three reference DUT testbenches."""

__version__ = "0.1.0"
