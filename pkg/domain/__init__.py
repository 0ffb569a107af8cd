"""Domain layer - Core models and entities"""
