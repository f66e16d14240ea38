"""Utility modules for the Meta-Termination MCP."""
from .file_utils import (
    read_file_safely,
    validate_file_paths,
    read_program_text,
    read_json_file,
    scan_directory_for_files,
    build_report,
    write_json_report,
    frame_to_records,
    write_frame_csv
)

__all__ = [
    'read_file_safely',
    'validate_file_paths',
    'read_program_text',
    'read_json_file',
    'scan_directory_for_files',
    'build_report',
    'write_json_report',
    'frame_to_records',
    'write_frame_csv'
]
