"""Tile-based dungeon simulator, solvers, gadget framework, and puzzle compilers."""

__version__ = "0.1.0"
