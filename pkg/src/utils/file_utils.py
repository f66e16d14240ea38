"""Utility functions for file operations and report output."""
import json
import logging
import os
import pandas as pd
from typing import Dict, Any, Optional, List

logger = logging.getLogger(__name__)

PROGRAM_EXTENSIONS = ('.pl', '.pro')


def read_file_safely(file_path: str) -> Optional[str]:
    """Safely read a file's content."""
    if not os.path.exists(file_path):
        return None

    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return f.read()
    except Exception as e:
        logger.warning(f"Error reading file {file_path}: {e}")
        return None


def validate_file_paths(*file_paths: str) -> None:
    """Validate that all file paths exist.

    Raises:
        FileNotFoundError: If any file doesn't exist
    """
    for file_path in file_paths:
        if not os.path.exists(file_path):
            raise FileNotFoundError(f"File not found: {file_path}")


def read_program_text(file_path: str) -> str:
    """Read a UTF-8 program file.

    Raises:
        FileNotFoundError: If the file doesn't exist or cannot be read
    """
    validate_file_paths(file_path)
    content = read_file_safely(file_path)
    if content is None:
        raise FileNotFoundError(f"Cannot read program file: {file_path}")
    return content


def read_json_file(file_path: str) -> Dict[str, Any]:
    """Read a JSON object from a file.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: If the content is not a JSON object
    """
    content = read_program_text(file_path)
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        raise ValueError(f"Malformed JSON in {file_path}: {e}") from e
    if not isinstance(data, dict):
        raise ValueError(f"Expected a JSON object in {file_path}")
    return data


def scan_directory_for_files(directory: str, *extensions: str) -> Dict[str, List[str]]:
    """Scan directory for files with specific extensions.

    Args:
        directory: Directory to scan
        extensions: File extensions to look for (e.g., '.pl')

    Returns:
        Dictionary mapping extensions to sorted lists of file paths
    """
    results = {ext: [] for ext in extensions}

    for item in sorted(os.listdir(directory)):
        item_path = os.path.join(directory, item)
        if os.path.isfile(item_path):
            for ext in extensions:
                if item.lower().endswith(ext):
                    results[ext].append(item_path)
                    break

    return results


def build_report(command: str, inputs: Dict[str, Any], budgets: Dict[str, Any],
                 result: Dict[str, Any], truncated: bool) -> Dict[str, Any]:
    """Assemble the machine-readable report every command emits."""
    return {
        "command": command,
        "inputs": inputs,
        "budgets": budgets,
        "result": result,
        "truncated": bool(truncated),
    }


def write_json_report(report: Dict[str, Any], file_path: str) -> None:
    """Write a report as indented UTF-8 JSON, creating parent directories."""
    parent = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(parent, exist_ok=True)
    with open(file_path, 'w', encoding='utf-8') as f:
        json.dump(report, f, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.debug(f"Wrote report to {file_path}")


def frame_to_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """Convert a summary table to JSON-ready rows."""
    return frame.fillna("").to_dict(orient="records")


def write_frame_csv(frame: pd.DataFrame, file_path: str) -> None:
    """Write a summary table as CSV."""
    frame.to_csv(file_path, index=False)
    logger.debug(f"Wrote {len(frame)} rows to {file_path}")
