"""Utility functions for Framekit"""
