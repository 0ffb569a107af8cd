"""
File handling service
"""

import os

from config.constants import ALLOWED_FILE_TYPES, MAX_FILE_SIZE_MB
from domain.exceptions import FileError, ValidationError


class FileService:
    """Service for file operations"""

    @staticmethod
    def validate_file(path: str) -> None:
        """
        Validate an input file

        Args:
            path: Path to the file

        Raises:
            FileError: If the file does not exist
            ValidationError: If the file type or size is not allowed
        """
        if not os.path.isfile(path):
            raise FileError(f"File not found: {path}")

        # Check file extension
        if not any(path.lower().endswith(ext) for ext in ALLOWED_FILE_TYPES):
            raise ValidationError(
                f"File type not allowed. Allowed types: {', '.join(ALLOWED_FILE_TYPES)}"
            )

        # Check file size
        size_mb = os.path.getsize(path) / (1024 * 1024)
        if size_mb > MAX_FILE_SIZE_MB:
            raise ValidationError(
                f"File size ({size_mb:.2f} MB) exceeds maximum allowed size "
                f"({MAX_FILE_SIZE_MB} MB)"
            )

    @staticmethod
    def read_file_content(path: str) -> bytes:
        """
        Validate and read a file

        Args:
            path: Path to the file

        Returns:
            File content as bytes

        Raises:
            FileError: If reading fails
        """
        FileService.validate_file(path)
        try:
            with open(path, 'rb') as handle:
                return handle.read()
        except OSError as e:
            raise FileError(f"Failed to read file {path}: {str(e)}") from e
