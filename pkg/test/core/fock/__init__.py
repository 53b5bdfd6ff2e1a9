"""Tests for the fock package."""
