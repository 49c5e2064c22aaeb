"""
Tests for QPManifolds (Layer 5)
"""
