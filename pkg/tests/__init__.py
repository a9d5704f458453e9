"""Tests for schwartz-linear-operators."""
