"""Tests for the simulator package."""
