"""
Tests for QPScenario (Layer 9)
"""
