"""
Adapter contract and workspace isolation for subject programs
"""
