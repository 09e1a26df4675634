"""Tests for the ncp_maps package."""
