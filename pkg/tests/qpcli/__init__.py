"""
Tests for QPCli (Layer 9)
"""
