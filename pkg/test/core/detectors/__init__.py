"""Tests for the detectors package."""
