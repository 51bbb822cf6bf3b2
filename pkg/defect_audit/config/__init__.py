"""
Configuration management for defect-audit
"""
