"""
Tests for QPMinimize (Layer 7)
"""
