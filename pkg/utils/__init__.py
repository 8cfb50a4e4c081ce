"""
Utilities: rock fields, result files, VTK output and plots
"""
