"""Spin symbols and joint spins."""
