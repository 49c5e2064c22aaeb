"""
Tests for QPFields (Layer 2)
"""
