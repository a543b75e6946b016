"""Experiment engines and statistics for Spin Symbols Lab"""
