"""Test suite for the active_margins package."""
