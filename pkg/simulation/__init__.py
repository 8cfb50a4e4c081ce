"""
Simulation module
"""
