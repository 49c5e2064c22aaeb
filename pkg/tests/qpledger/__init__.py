"""
Tests for QPLedger (Layer 8)
"""
