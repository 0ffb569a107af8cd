"""Service layer - Business logic"""

