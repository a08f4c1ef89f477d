"""
Test suite for the r-division toolkit
"""
