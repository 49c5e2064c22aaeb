"""
Tests for QPVerify (Layer 8)
"""
