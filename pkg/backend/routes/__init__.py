"""
MCWC Toolkit Routes Package
"""
