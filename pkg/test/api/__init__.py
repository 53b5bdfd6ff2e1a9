"""Tests for the public api."""
