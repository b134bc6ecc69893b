import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize("args", [
    ["pn_existence_table.py", "--n", "3", "--max-order", "4"],
    ["crosscheck_fixtures.py", "--fixtures", "p1", "p2", "--max-order", "2"],
])
def test_script_runs_clean(args):
    out = subprocess.run([sys.executable, str(SCRIPTS / args[0]), *args[1:]],
                         capture_output=True, text=True, timeout=120)
    assert out.returncode == 0, out.stderr
