"""Executable script entry points for the coverage tools."""
