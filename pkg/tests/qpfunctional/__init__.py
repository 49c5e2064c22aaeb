"""
Tests for QPFunctional (Layer 4)
"""
