"""
Test suite for irs-noma outage analysis
"""
