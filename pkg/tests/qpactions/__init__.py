"""
Tests for QPActions (Layer 3)
"""
