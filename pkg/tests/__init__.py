"""Tests for the mitigation checker."""
