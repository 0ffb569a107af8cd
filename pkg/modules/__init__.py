"""Numerical modules for Framekit"""
