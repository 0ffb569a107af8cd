"""Test fixtures"""

