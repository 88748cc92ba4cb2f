"""Test suite for scramblesim."""
