"""
Tests for QPCurves (Layer 1)
"""
