import json
import os
import subprocess
import sys
from pathlib import Path

PROBE = Path(__file__).parent / "helpers" / "backend_probe.py"


def _probe(flag: str) -> dict:
    env = dict(os.environ, TIMEVORTEX_NUMBA=flag)
    res = subprocess.run([sys.executable, str(PROBE), "48"], env=env, capture_output=True,
                         text=True, check=True, timeout=600)
    return json.loads(res.stdout)


def test_numba_and_fallback_agree():
    fast = _probe("1")
    slow = _probe("0")
    assert fast.pop("backend") == "numba"
    assert slow.pop("backend") == "numpy"
    assert fast == slow
