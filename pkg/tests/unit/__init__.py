"""Unit test initialization."""
