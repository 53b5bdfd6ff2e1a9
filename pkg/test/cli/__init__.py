"""Tests for dapsim.cli."""
