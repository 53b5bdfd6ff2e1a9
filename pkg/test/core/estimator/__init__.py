"""Tests for the estimator package."""
