"""
Scenario-replay subjects that simulate pathological test suites
"""
