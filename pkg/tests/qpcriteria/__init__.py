"""
Tests for QPCriteria (Layer 6)
"""
