import json
import os
import pytest
import pandas as pd
from src.utils.file_utils import (
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

def test_read_file_safely(tmp_path):
    """Test safe file reading."""
    file_path = tmp_path / "test.pl"
    file_path.write_text("p(a).\n")

    content = read_file_safely(str(file_path))
    assert content == "p(a).\n"

    # Test nonexistent file
    assert read_file_safely("nonexistent.pl") is None

def test_read_program_text(test_data_dir):
    """Test reading a program file."""
    text = read_program_text(str(test_data_dir / "ex31.pl"))
    assert "q(b)." in text

    with pytest.raises(FileNotFoundError):
        read_program_text(str(test_data_dir / "missing.pl"))

def test_validate_file_paths(test_data_dir):
    """Test path validation."""
    validate_file_paths(str(test_data_dir / "ex12.pl"), str(test_data_dir / "ex13.pl"))
    with pytest.raises(FileNotFoundError):
        validate_file_paths(str(test_data_dir / "ex12.pl"), "/invalid/path.pl")

def test_read_json_file(test_data_dir, tmp_path):
    """Test reading JSON objects."""
    data = read_json_file(str(test_data_dir / "ex13_mapping.json"))
    assert data["kind"] == "linear"

    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(ValueError):
        read_json_file(str(tmp_path / "list.json"))

    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(ValueError):
        read_json_file(str(tmp_path / "broken.json"))

def test_scan_directory_for_files(test_data_dir):
    """Test directory scanning for files."""
    files = scan_directory_for_files(str(test_data_dir), '.pl', '.json')

    assert len(files['.pl']) == 7
    assert len(files['.json']) == 1
    assert os.path.basename(files['.pl'][0]) == "ap0.pl"
    assert all(os.path.exists(f) for f in files['.pl'])

def test_build_and_write_report(tmp_path):
    """Test report assembly and JSON output."""
    report = build_report("run", {"query": "p(X)"}, {"max_nodes": 10}, {"answers": []}, 0)
    assert list(report) == ["command", "inputs", "budgets", "result", "truncated"]
    assert report["truncated"] is False

    out_path = tmp_path / "reports" / "run.json"
    write_json_report(report, str(out_path))
    assert json.loads(out_path.read_text(encoding="utf-8")) == report

def test_frame_output(tmp_path):
    """Test summary table conversion and CSV output."""
    frame = pd.DataFrame({"case": ["a", "b"], "calls": ["pass", None]})
    assert frame_to_records(frame) == [{"case": "a", "calls": "pass"}, {"case": "b", "calls": ""}]

    csv_path = tmp_path / "summary.csv"
    write_frame_csv(frame, str(csv_path))
    assert pd.read_csv(csv_path)["case"].tolist() == ["a", "b"]
