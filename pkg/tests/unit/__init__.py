"""Unit tests for scramblesim."""
