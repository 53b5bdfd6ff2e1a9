"""Testing utils we want to expose for usage by plugins."""
