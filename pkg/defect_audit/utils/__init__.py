"""
Shared utilities: terminal output, formatting and caching
"""
