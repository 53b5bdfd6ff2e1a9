"""Tests for the core library."""
