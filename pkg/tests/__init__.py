"""
Tests module
"""
