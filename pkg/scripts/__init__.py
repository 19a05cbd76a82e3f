"""
Scripts package
"""

