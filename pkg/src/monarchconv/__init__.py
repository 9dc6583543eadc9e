"""Monarch structured-matrix library."""
