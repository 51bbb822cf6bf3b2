"""
Defect Audit - workability and test-suite adequacy auditing for APR defect datasets
"""

__version__ = "0.1.0"
