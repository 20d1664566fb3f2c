"""
Test suite for gammaops
"""
