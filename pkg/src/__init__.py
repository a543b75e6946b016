"""Spin Symbols Lab - Core Package"""
