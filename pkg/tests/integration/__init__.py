"""Integration test initialization."""
