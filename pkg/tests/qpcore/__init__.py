"""
Tests for QPCore (Layer 0)
"""
