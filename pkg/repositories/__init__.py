"""Repository layer - Fixture and file access"""
