"""Tests"""

