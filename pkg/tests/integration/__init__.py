"""Integration tests for scramblesim."""
