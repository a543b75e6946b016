"""Command-line runner for Spin Symbols Lab experiments"""
